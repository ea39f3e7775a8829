#pragma once

#include <Eigen/Core>

#include "raceline/errors.hpp"

namespace raceline {

using Vec13 = Eigen::Matrix<double, 13, 1>;

/// Physical constants of the quadrotor. Defaults reproduce the MamboFly
/// platform used in all shipped configurations.
struct DroneParams {
    double mass = 0.063;           ///< [kg]
    double gravity = 9.81;         ///< [m/s^2]
    double arm_length = 0.0624;    ///< rotor offset from center of mass [m]
    Eigen::Vector3d inertia{5.82857e-5, 7.16914e-5, 1.0e-4};  ///< diagonal of J [kg m^2]
    double torque_thrust = 0.0024; ///< reaction-torque/thrust constant [m]

    static DroneParams mambofly() { return DroneParams{}; }

    /// Per-rotor thrust that balances gravity: m g / 4.
    double hover_thrust() const { return mass * gravity / 4.0; }

    void validate() const {
        if (!(mass > 0.0) || !(gravity > 0.0) || !(arm_length > 0.0) ||
            !(torque_thrust > 0.0) || !(inertia.array() > 0.0).all()) {
            throw ConfigError("drone parameters must all be strictly positive");
        }
    }
};

/// 13-dimensional rigid-body state. Quaternion is scalar-first,
/// body-to-inertial convention; unit norm within 1e-6 after renormalization.
struct DroneState {
    Eigen::Vector3d position = Eigen::Vector3d::Zero();   ///< [m]
    Eigen::Vector3d velocity = Eigen::Vector3d::Zero();   ///< [m/s]
    Eigen::Vector3d body_rate = Eigen::Vector3d::Zero();  ///< [rad/s]
    Eigen::Vector4d quaternion{1.0, 0.0, 0.0, 0.0};

    Vec13 pack() const {
        Vec13 x;
        x << position, velocity, body_rate, quaternion;
        return x;
    }
    static DroneState unpack(const Eigen::Ref<const Vec13>& x) {
        DroneState s;
        s.position = x.segment<3>(0);
        s.velocity = x.segment<3>(3);
        s.body_rate = x.segment<3>(6);
        s.quaternion = x.segment<4>(9);
        return s;
    }
    void renormalize() { quaternion /= quaternion.norm(); }
};

/// Four rotor thrusts (F1..F4) [N]. Unconstrained by design: the racing
/// problems penalize input deviation quadratically instead of clamping.
struct ControlInput {
    Eigen::Vector4d thrust = Eigen::Vector4d::Zero();

    static ControlInput hover(const DroneParams& p) {
        return ControlInput{Eigen::Vector4d::Constant(p.hover_thrust())};
    }
};

/// Body-to-inertial rotation matrix Q(q) of a unit quaternion.
Eigen::Matrix3d rotation_matrix(const Eigen::Vector4d& q);

/// Third column of Q(q): the inertial direction of body-frame thrust.
Eigen::Vector3d thrust_axis(const Eigen::Vector4d& q);

/// d(thrust_axis)/dq, a 3x4 matrix.
Eigen::Matrix<double, 3, 4> thrust_axis_jacobian(const Eigen::Vector4d& q);

/// Quaternion kinematics qdot = 1/2 Omega(omega) q.
Eigen::Vector4d quaternion_rate(const Eigen::Vector4d& q, const Eigen::Vector3d& omega);

/// Skew-symmetric quaternion-rate matrix Omega(omega).
Eigen::Matrix4d omega_matrix(const Eigen::Vector3d& omega);

/// d(Omega(omega) q)/domega, a 4x3 matrix.
Eigen::Matrix<double, 4, 3> quaternion_rate_jacobian_omega(const Eigen::Vector4d& q);

/// Thrust-to-torque mixing matrix (3x4).
Eigen::Matrix<double, 3, 4> mixer_matrix(const DroneParams& p);

/// Full 13-dimensional rigid-body state derivative.
Vec13 drone_derivative(const DroneState& state, const ControlInput& input,
                       const DroneParams& params);

}  // namespace raceline
