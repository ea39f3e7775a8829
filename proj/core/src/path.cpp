#include "raceline/path.hpp"

#include <cmath>

namespace raceline {

SinusoidPath::SinusoidPath(std::array<AxisTerms, 3> terms, double theta_min, double theta_max)
    : ParametricPath(theta_min, theta_max), terms_(std::move(terms)) {
    bool any = false;
    for (const auto& axis : terms_) {
        for (const auto& t : axis) {
            if (!std::isfinite(t.amplitude) || !std::isfinite(t.frequency) ||
                !std::isfinite(t.phase)) {
                throw ConfigError("sinusoid path term has non-finite coefficient");
            }
            if (t.amplitude != 0.0 && t.frequency != 0.0) any = true;
        }
    }
    if (!any) {
        throw ConfigError("sinusoid path is degenerate (zero tangent everywhere)");
    }
}

PathPoint SinusoidPath::eval(double theta) const {
    PathPoint p;
    p.r.setZero();
    p.dr.setZero();
    p.ddr.setZero();
    p.dddr.setZero();
    for (int axis = 0; axis < 3; ++axis) {
        for (const auto& t : terms_[axis]) {
            const double arg = t.frequency * theta + t.phase;
            const double s = std::sin(arg);
            const double c = std::cos(arg);
            const double w = t.frequency;
            p.r(axis) += t.amplitude * s;
            p.dr(axis) += t.amplitude * w * c;
            p.ddr(axis) -= t.amplitude * w * w * s;
            p.dddr(axis) -= t.amplitude * w * w * w * c;
        }
    }
    return p;
}

SinusoidPath race_course(double theta_min, double theta_max) {
    std::array<SinusoidPath::AxisTerms, 3> terms;
    terms[0] = {{6.0, 1.0, 0.0}};
    terms[1] = {{3.0, 2.0, 0.0}};
    terms[2] = {{6.0, 0.5, 0.0}};
    return SinusoidPath(std::move(terms), theta_min, theta_max);
}

}  // namespace raceline
