#pragma once

#include "raceline/race.hpp"

namespace raceline {

/// The four pairings Race(front, rear) over controllers {M = one-sided,
/// D = game}, in the fixed order MM, MD, DM, DD.
struct FourRaces {
    RaceLog front_m_rear_m;
    RaceLog front_m_rear_d;
    RaceLog front_d_rear_m;
    RaceLog front_d_rear_d;
};

/// Verdict thresholds for the race comparisons.
struct ComparisonThresholds {
    double window_start = 1.0;         ///< skip the initial transient [s]
    double overtaking_fraction = 0.9;  ///< required share for rear-progress dominance
    double obstructing_fraction = 0.8; ///< required share for front-slowing dominance

    void validate() const {
        if (!(window_start >= 0.0) || !(overtaking_fraction >= 0.0) ||
            !(overtaking_fraction <= 1.0) || !(obstructing_fraction >= 0.0) ||
            !(obstructing_fraction <= 1.0)) {
            throw ConfigError("comparison thresholds out of range");
        }
    }
};

/// One pairwise progress comparison over a common pre-overtake window:
/// the share of samples where the expected strict inequality held, plus
/// the difference series for plotting.
struct FractionResult {
    std::string label;
    double window_start = 0.0;
    double window_end = 0.0;
    double fraction = 0.0;
    double threshold = 0.0;
    bool pass = false;
    std::vector<double> time;        ///< samples inside the window
    std::vector<double> difference;  ///< lhs - rhs progress at those samples
};

/// The final endpoint ordering: the game controller overtaken later than
/// the one-sided controller at the end of the common window.
struct EndpointResult {
    double window_end = 0.0;
    double rear_m_behind_d = 0.0;  ///< rear progress in Race(D,M)
    double rear_d_behind_m = 0.0;  ///< rear progress in Race(M,D)
    bool pass = false;             ///< rear_m_behind_d < rear_d_behind_m
};

struct ComparisonReport {
    std::array<double, 4> overtake_times{};  ///< MM, MD, DM, DD order
    std::vector<FractionResult> overtaking;  ///< rear D vs rear M, per front controller
    std::vector<FractionResult> obstructing; ///< front D vs front M, per rear controller
    std::vector<FractionResult> chains;      ///< the four derived orderings
    EndpointResult endpoint;

    bool all_pass() const;
    /// Human-readable multi-line summary.
    std::string format() const;
};

/// Evaluate the full comparison protocol. Throws IncompleteRaces when any
/// race finished without an overtake, and ConfigError when the logs do not
/// share one time grid.
ComparisonReport compare_races(const FourRaces& races,
                               const ComparisonThresholds& thresholds = {});

}  // namespace raceline
