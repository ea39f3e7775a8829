#include "raceline/projection.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "raceline/errors.hpp"

namespace raceline {

double stationarity_residual(const ParametricPath& path, double theta,
                             const Eigen::Vector3d& p) {
    const PathPoint pt = path.eval(theta);
    return (pt.r - p).dot(pt.dr);
}

double stationarity_derivative(const ParametricPath& path, double theta,
                               const Eigen::Vector3d& p) {
    const PathPoint pt = path.eval(theta);
    return pt.dr.squaredNorm() + (pt.r - p).dot(pt.ddr);
}

double singularity_margin(const ParametricPath& path, double theta,
                          const Eigen::Vector3d& p) {
    const PathPoint pt = path.eval(theta);
    return pt.dr.squaredNorm() - (pt.r - p).norm() * pt.ddr.norm();
}

double projection_rate(const ParametricPath& path, double theta,
                       const Eigen::Vector3d& p, const Eigen::Vector3d& v) {
    const PathPoint pt = path.eval(theta);
    const double denom = pt.dr.squaredNorm() + (pt.r - p).dot(pt.ddr);
    // Relative floor: the denominator is ||r'||^2 + O(error), so a value
    // this far below ||r'||^2 means the projection is about to fold over.
    if (denom <= 1e-6 * pt.dr.squaredNorm()) {
        throw SingularProjection(theta, denom);
    }
    return v.dot(pt.dr) / denom;
}

double arc_length_rate(const ParametricPath& path, double theta, double theta_dot) {
    return path.eval(theta).dr.norm() * theta_dot;
}

namespace {

double speed(const ParametricPath& path, double theta) {
    return path.eval(theta).dr.norm();
}

// Adaptive Simpson with cached endpoint/midpoint evaluations.
double simpson_recurse(const ParametricPath& path, double a, double b, double fa,
                       double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = speed(path, lm), frm = speed(path, rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return simpson_recurse(path, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_recurse(path, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double signed_arc_length(const ParametricPath& path, double theta0, double theta1) {
    if (theta0 == theta1) return 0.0;
    const double sign = theta1 >= theta0 ? 1.0 : -1.0;
    const double a = std::min(theta0, theta1), b = std::max(theta0, theta1);
    const double fa = speed(path, a), fb = speed(path, b);
    const double m = 0.5 * (a + b);
    const double fm = speed(path, m);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return sign * simpson_recurse(path, a, b, fa, fm, fb, whole, 1e-10, 48);
}

double solve_initial_projection(const ParametricPath& path, const Eigen::Vector3d& p,
                                std::optional<double> hint, int grid_points) {
    if (grid_points < 2) {
        throw ConfigError("projection grid needs at least two points");
    }
    const double lo = path.theta_min(), hi = path.theta_max();
    const double step = (hi - lo) / (grid_points - 1);

    // Collect every grid point that is a local minimum of the distance;
    // each is a candidate branch to polish.
    std::vector<double> dist(grid_points);
    for (int i = 0; i < grid_points; ++i) {
        dist[i] = (path.position(lo + i * step) - p).squaredNorm();
    }
    std::vector<int> candidates;
    for (int i = 0; i < grid_points; ++i) {
        const double left = i > 0 ? dist[i - 1] : std::numeric_limits<double>::infinity();
        const double right =
            i + 1 < grid_points ? dist[i + 1] : std::numeric_limits<double>::infinity();
        if (dist[i] <= left && dist[i] <= right) candidates.push_back(i);
    }

    struct Root {
        double theta;
        double dist2;
    };
    std::vector<Root> roots;
    for (int idx : candidates) {
        double theta = lo + idx * step;
        bool converged = false;
        for (int iter = 0; iter < 60; ++iter) {
            const double g = stationarity_residual(path, theta, p);
            const double D = stationarity_derivative(path, theta, p);
            if (D <= 0.0) break;  // polishing toward a maximum or saddle
            const double next = std::clamp(theta - g / D, lo, hi);
            const bool stalled = std::abs(next - theta) < 1e-15;
            theta = next;
            if (std::abs(stationarity_residual(path, theta, p)) < 1e-10 || stalled) {
                converged = std::abs(stationarity_residual(path, theta, p)) < 1e-10 ||
                            theta == lo || theta == hi;
                break;
            }
        }
        // Interval endpoints are admissible even when the stationarity
        // condition cannot be met there (the minimum sits on the boundary).
        if (!converged) continue;
        const bool interior = theta > lo && theta < hi;
        if (interior && stationarity_derivative(path, theta, p) <= 0.0) continue;
        roots.push_back({theta, (path.position(theta) - p).squaredNorm()});
    }
    if (roots.empty()) {
        throw NoProjectionFound("no well-posed projection of point onto path");
    }

    if (hint) {
        // The hint encodes branch knowledge (e.g. the previous estimate of a
        // moving point): take the candidate nearest to it in parameter, even
        // when another branch is closer in space.
        const Root* pick = &roots.front();
        for (const Root& r : roots) {
            if (std::abs(r.theta - *hint) < std::abs(pick->theta - *hint)) {
                pick = &r;
            }
        }
        return pick->theta;
    }

    const Root* pick = &roots.front();
    for (const Root& r : roots) {
        if (r.dist2 < pick->dist2) pick = &r;
    }
    return pick->theta;
}

Vec15 augmented_derivative(const AugmentedState& s, const ControlInput& u,
                           const ParametricPath& path, const DroneParams& params) {
    const double theta_dot =
        projection_rate(path, s.theta, s.drone.position, s.drone.velocity);
    Vec15 dx;
    dx << drone_derivative(s.drone, u, params), theta_dot,
        arc_length_rate(path, s.theta, theta_dot);
    return dx;
}

}  // namespace raceline
