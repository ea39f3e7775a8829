#pragma once

#include <array>
#include <functional>
#include <vector>

#include <Eigen/Core>

#include "raceline/errors.hpp"

namespace raceline {

/// Curve value and its first three parameter derivatives at one theta.
struct PathPoint {
    Eigen::Vector3d r;     ///< r(theta) [m]
    Eigen::Vector3d dr;    ///< dr/dtheta
    Eigen::Vector3d ddr;   ///< d2r/dtheta2
    Eigen::Vector3d dddr;  ///< d3r/dtheta3
};

/// A regular, twice-differentiable space curve r(theta) on a parameter
/// interval. Derivatives are supplied in closed form by each concrete
/// path; the third derivative feeds the analytic Jacobians of the
/// projection dynamics.
class ParametricPath {
public:
    virtual ~ParametricPath() = default;

    virtual PathPoint eval(double theta) const = 0;

    double theta_min() const { return theta_min_; }
    double theta_max() const { return theta_max_; }
    bool contains(double theta) const {
        return theta >= theta_min_ && theta <= theta_max_;
    }

    Eigen::Vector3d position(double theta) const { return eval(theta).r; }

protected:
    ParametricPath(double theta_min, double theta_max)
        : theta_min_(theta_min), theta_max_(theta_max) {
        if (!(theta_min < theta_max)) {
            throw ConfigError("path parameter interval must satisfy theta_min < theta_max");
        }
    }

private:
    double theta_min_;
    double theta_max_;
};

/// Sum-of-sinusoids curve: r_i(theta) = sum_j A_ij sin(w_ij theta + phi_ij).
/// All derivative orders stay closed-form sums of the same sin/cos terms.
class SinusoidPath final : public ParametricPath {
public:
    struct Term {
        double amplitude;
        double frequency;
        double phase;
    };
    using AxisTerms = std::vector<Term>;

    SinusoidPath(std::array<AxisTerms, 3> terms, double theta_min, double theta_max);

    PathPoint eval(double theta) const override;

    const std::array<AxisTerms, 3>& terms() const { return terms_; }

private:
    std::array<AxisTerms, 3> terms_;
};

/// The benchmark race course (6 sin t, 3 sin 2t, 6 sin t/2), selectable in
/// configuration by the name "paper-course".
SinusoidPath race_course(double theta_min = -6.283185307179586,
                         double theta_max = 25.132741228718345);

/// Path defined by user-supplied closed-form callables. Used for simple
/// analytic test curves (lines, circles, helices).
class AnalyticPath final : public ParametricPath {
public:
    using Fn = std::function<Eigen::Vector3d(double)>;

    AnalyticPath(Fn r, Fn dr, Fn ddr, Fn dddr, double theta_min, double theta_max)
        : ParametricPath(theta_min, theta_max),
          r_(std::move(r)), dr_(std::move(dr)), ddr_(std::move(ddr)), dddr_(std::move(dddr)) {}

    PathPoint eval(double theta) const override {
        return PathPoint{r_(theta), dr_(theta), ddr_(theta), dddr_(theta)};
    }

private:
    Fn r_, dr_, ddr_, dddr_;
};

}  // namespace raceline
