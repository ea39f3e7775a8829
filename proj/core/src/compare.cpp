#include "raceline/compare.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace raceline {

namespace {

struct Curve {
    const char* name;  // pairing label "front,rear"
    ProgressSeries progress;
    double overtake = 0.0;
};

// Share of window samples where lhs(t) `cmp` rhs(t) holds strictly.
FractionResult fraction_result(const std::string& label, const Curve& lhs,
                               const Curve& rhs, bool expect_greater,
                               double window_start, double threshold) {
    FractionResult out;
    out.label = label;
    out.window_start = window_start;
    out.window_end = std::min(lhs.overtake, rhs.overtake);
    out.threshold = threshold;

    int satisfied = 0, total = 0;
    for (std::size_t i = 0; i < lhs.progress.time.size(); ++i) {
        const double t = lhs.progress.time[i];
        if (t < window_start || t > out.window_end) continue;
        const double a = lhs.progress.rear_theta[i];
        const double b = rhs.progress.rear_theta[i];
        out.time.push_back(t);
        out.difference.push_back(a - b);
        ++total;
        if (expect_greater ? a > b : a < b) ++satisfied;
    }
    out.fraction = total > 0 ? static_cast<double>(satisfied) / total : 0.0;
    out.pass = out.fraction >= threshold;
    return out;
}

}  // namespace

bool ComparisonReport::all_pass() const {
    const auto ok = [](const std::vector<FractionResult>& v) {
        return std::all_of(v.begin(), v.end(),
                           [](const FractionResult& f) { return f.pass; });
    };
    return ok(overtaking) && ok(obstructing) && endpoint.pass;
}

std::string ComparisonReport::format() const {
    std::string out;
    char line[256];
    const char* names[4] = {"Race(M,M)", "Race(M,D)", "Race(D,M)", "Race(D,D)"};
    for (int i = 0; i < 4; ++i) {
        std::snprintf(line, sizeof line, "%s overtake at t = %.3f s\n", names[i],
                      overtake_times[i]);
        out += line;
    }
    const auto dump = [&](const char* title, const std::vector<FractionResult>& v) {
        out += title;
        out += '\n';
        for (const FractionResult& f : v) {
            std::snprintf(line, sizeof line,
                          "  %-34s window [%.3f, %.3f] s  fraction %.4f (>= %.2f)  %s\n",
                          f.label.c_str(), f.window_start, f.window_end, f.fraction,
                          f.threshold, f.pass ? "pass" : "FAIL");
            out += line;
        }
    };
    dump("overtaking (rear D should outpace rear M):", overtaking);
    dump("obstructing (front D should slow the rear more than front M):", obstructing);
    dump("derived orderings:", chains);
    std::snprintf(line, sizeof line,
                  "endpoint at t = %.3f s: rear M behind D %.4f %s rear D behind M %.4f  %s\n",
                  endpoint.window_end, endpoint.rear_m_behind_d,
                  endpoint.pass ? "<" : ">=", endpoint.rear_d_behind_m,
                  endpoint.pass ? "pass" : "FAIL");
    out += line;
    return out;
}

ComparisonReport compare_races(const FourRaces& races,
                               const ComparisonThresholds& thresholds) {
    thresholds.validate();

    Curve mm{"M,M", extract_progress(races.front_m_rear_m)};
    Curve md{"M,D", extract_progress(races.front_m_rear_d)};
    Curve dm{"D,M", extract_progress(races.front_d_rear_m)};
    Curve dd{"D,D", extract_progress(races.front_d_rear_d)};

    const std::size_t n = mm.progress.time.size();
    for (const Curve* c : {&md, &dm, &dd}) {
        if (c->progress.time.size() != n) {
            throw ConfigError("race comparison requires identical time grids");
        }
    }
    for (Curve* c : {&mm, &md, &dm, &dd}) {
        if (!c->progress.overtake_time) {
            throw IncompleteRaces("race (" + std::string(c->name) +
                                  ") finished without an overtake");
        }
        c->overtake = *c->progress.overtake_time;
    }

    ComparisonReport report;
    report.overtake_times = {mm.overtake, md.overtake, dm.overtake, dd.overtake};

    report.overtaking.push_back(fraction_result("rear D vs rear M behind front M", md,
                                                mm, true, thresholds.window_start,
                                                thresholds.overtaking_fraction));
    report.overtaking.push_back(fraction_result("rear D vs rear M behind front D", dd,
                                                dm, true, thresholds.window_start,
                                                thresholds.overtaking_fraction));

    report.obstructing.push_back(fraction_result("front D vs front M over rear M", dm,
                                                 mm, false, thresholds.window_start,
                                                 thresholds.obstructing_fraction));
    report.obstructing.push_back(fraction_result("front D vs front M over rear D", dd,
                                                 md, false, thresholds.window_start,
                                                 thresholds.obstructing_fraction));

    // Orderings implied by the two properties above; reported, not gated.
    report.chains.push_back(fraction_result("Race(D,M) below Race(D,D)", dm, dd, false,
                                            thresholds.window_start, 0.0));
    report.chains.push_back(fraction_result("Race(D,D) below Race(M,D)", dd, md, false,
                                            thresholds.window_start, 0.0));
    report.chains.push_back(fraction_result("Race(D,M) below Race(M,M)", dm, mm, false,
                                            thresholds.window_start, 0.0));
    report.chains.push_back(fraction_result("Race(M,M) below Race(M,D)", mm, md, false,
                                            thresholds.window_start, 0.0));

    // Endpoint ordering at the end of the common pre-overtake window of the
    // fastest-deciding pair.
    EndpointResult& ep = report.endpoint;
    ep.window_end = std::min(dm.overtake, md.overtake);
    std::size_t idx = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (dm.progress.time[i] <= ep.window_end) idx = i;
    }
    ep.rear_m_behind_d = dm.progress.rear_theta[idx];
    ep.rear_d_behind_m = md.progress.rear_theta[idx];
    ep.pass = ep.rear_m_behind_d < ep.rear_d_behind_m;

    return report;
}

}  // namespace raceline
