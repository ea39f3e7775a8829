#include "raceline/dynamics.hpp"

#include <Eigen/Geometry>

namespace raceline {

Eigen::Matrix3d rotation_matrix(const Eigen::Vector4d& q) {
    const double q0 = q(0), q1 = q(1), q2 = q(2), q3 = q(3);
    Eigen::Matrix3d Q;
    Q << q0 * q0 + q1 * q1 - q2 * q2 - q3 * q3, 2.0 * (q1 * q2 - q0 * q3),
        2.0 * (q0 * q2 + q1 * q3),
        2.0 * (q1 * q2 + q0 * q3), q0 * q0 - q1 * q1 + q2 * q2 - q3 * q3,
        2.0 * (q2 * q3 - q0 * q1),
        2.0 * (q1 * q3 - q0 * q2), 2.0 * (q0 * q1 + q2 * q3),
        q0 * q0 - q1 * q1 - q2 * q2 + q3 * q3;
    return Q;
}

Eigen::Vector3d thrust_axis(const Eigen::Vector4d& q) {
    const double q0 = q(0), q1 = q(1), q2 = q(2), q3 = q(3);
    return {2.0 * (q0 * q2 + q1 * q3), 2.0 * (q2 * q3 - q0 * q1),
            q0 * q0 - q1 * q1 - q2 * q2 + q3 * q3};
}

Eigen::Matrix<double, 3, 4> thrust_axis_jacobian(const Eigen::Vector4d& q) {
    const double q0 = q(0), q1 = q(1), q2 = q(2), q3 = q(3);
    Eigen::Matrix<double, 3, 4> M;
    M << q2, q3, q0, q1,
        -q1, -q0, q3, q2,
        q0, -q1, -q2, q3;
    return 2.0 * M;
}

Eigen::Matrix4d omega_matrix(const Eigen::Vector3d& w) {
    Eigen::Matrix4d O;
    O << 0.0, -w(0), -w(1), -w(2),
        w(0), 0.0, w(2), -w(1),
        w(1), -w(2), 0.0, w(0),
        w(2), w(1), -w(0), 0.0;
    return O;
}

Eigen::Vector4d quaternion_rate(const Eigen::Vector4d& q, const Eigen::Vector3d& w) {
    return 0.5 * omega_matrix(w) * q;
}

Eigen::Matrix<double, 4, 3> quaternion_rate_jacobian_omega(const Eigen::Vector4d& q) {
    const double q0 = q(0), q1 = q(1), q2 = q(2), q3 = q(3);
    Eigen::Matrix<double, 4, 3> G;
    G << -q1, -q2, -q3,
        q0, -q3, q2,
        q3, q0, -q1,
        -q2, q1, q0;
    return G;
}

Eigen::Matrix<double, 3, 4> mixer_matrix(const DroneParams& p) {
    const double l = p.arm_length, k = p.torque_thrust;
    Eigen::Matrix<double, 3, 4> T;
    T << 0.0, l, 0.0, -l,
        -l, 0.0, l, 0.0,
        k, -k, k, -k;
    return T;
}

Vec13 drone_derivative(const DroneState& s, const ControlInput& u, const DroneParams& p) {
    const double total_thrust = u.thrust.sum();
    const Eigen::Vector3d accel =
        thrust_axis(s.quaternion) * (total_thrust / p.mass) -
        Eigen::Vector3d(0.0, 0.0, p.gravity);

    const Eigen::Vector3d Jw = p.inertia.cwiseProduct(s.body_rate);
    const Eigen::Vector3d torque = mixer_matrix(p) * u.thrust;
    const Eigen::Vector3d omega_dot =
        (torque - s.body_rate.cross(Jw)).cwiseQuotient(p.inertia);

    Vec13 dx;
    dx << s.velocity, accel, omega_dot, quaternion_rate(s.quaternion, s.body_rate);
    return dx;
}

}  // namespace raceline
