#pragma once

#include <optional>

#include <Eigen/Core>

#include "raceline/dynamics.hpp"
#include "raceline/path.hpp"

namespace raceline {

using Vec15 = Eigen::Matrix<double, 15, 1>;

/// Drone state augmented with its projection-point parameter and the arc
/// length traveled by the projection since t = 0.
struct AugmentedState {
    DroneState drone;
    double theta = 0.0;  ///< path parameter of the projection point
    double sigma = 0.0;  ///< signed arc length [m]

    Vec15 pack() const {
        Vec15 x;
        x << drone.pack(), theta, sigma;
        return x;
    }
    static AugmentedState unpack(const Eigen::Ref<const Vec15>& x) {
        AugmentedState s;
        s.drone = DroneState::unpack(x.head<13>());
        s.theta = x(13);
        s.sigma = x(14);
        return s;
    }
};

/// Stationarity residual of the closest-point condition:
/// g(theta) = (r(theta) - p)' r'(theta). Zero at a projection point.
double stationarity_residual(const ParametricPath& path, double theta,
                             const Eigen::Vector3d& p);

/// Derivative of the stationarity residual,
/// D(theta) = ||r'||^2 + (r - p)' r''. The projection dynamics divide by
/// this quantity, so a well-posed projection requires D > 0.
double stationarity_derivative(const ParametricPath& path, double theta,
                               const Eigen::Vector3d& p);

/// Worst-case local well-posedness margin ||r'||^2 - ||r - p|| ||r''||.
/// Positive margin guarantees D > 0 regardless of the error direction.
double singularity_margin(const ParametricPath& path, double theta,
                          const Eigen::Vector3d& p);

/// Time derivative of the projection parameter for a point moving with
/// velocity v: thetadot = v' r'(theta) / D(theta).
/// Throws SingularProjection when D falls below a relative floor.
double projection_rate(const ParametricPath& path, double theta,
                       const Eigen::Vector3d& p, const Eigen::Vector3d& v);

/// Arc-length rate sigmadot = ||r'(theta)|| thetadot.
double arc_length_rate(const ParametricPath& path, double theta, double theta_dot);

/// Arc length along the path from theta0 to theta1 (signed: negative when
/// theta1 < theta0). Adaptive Simpson quadrature, absolute tolerance 1e-10.
double signed_arc_length(const ParametricPath& path, double theta0, double theta1);

/// Find a projection parameter for p: grid scan over the path interval
/// followed by a Newton polish of the stationarity condition.
///
/// Multiple branches can tie (the course self-intersects); `hint` selects
/// the branch whose parameter is nearest, otherwise the globally closest
/// point wins. Throws NoProjectionFound when no candidate satisfies the
/// second-order condition D > 0.
double solve_initial_projection(const ParametricPath& path, const Eigen::Vector3d& p,
                                std::optional<double> hint = std::nullopt,
                                int grid_points = 1000);

/// 15-dimensional state derivative: rigid-body dynamics stacked with the
/// projection-point and arc-length rates. Throws SingularProjection when
/// the projection denominator is about to vanish.
Vec15 augmented_derivative(const AugmentedState& state, const ControlInput& input,
                           const ParametricPath& path, const DroneParams& params);

}  // namespace raceline
