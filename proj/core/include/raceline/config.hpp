#pragma once

#include <string>

#include "raceline/compare.hpp"

namespace raceline {

/// Fully resolved application configuration: one race setup, the course,
/// and the comparison thresholds. Loaded from a JSON document whose every
/// field is optional and defaults to the shipped benchmark values.
struct AppConfig {
    RaceConfig race;
    ComparisonThresholds comparison;

    std::string path_name = "paper-course";  ///< or "custom"
    std::array<SinusoidPath::AxisTerms, 3> path_terms{};  ///< used when custom
    double theta_min = -6.283185307179586;
    double theta_max = 25.132741228718345;

    SinusoidPath make_path() const;
    void validate() const;
};

/// Parse a configuration document. `source` names the file in messages.
/// Unknown keys are rejected (typo safety). Throws ConfigError.
AppConfig parse_config(const std::string& json_text, const std::string& source);

/// Read and parse a configuration file.
AppConfig load_config(const std::string& file);

/// Canonical JSON snapshot of a resolved configuration (stable key order),
/// embedded in the run manifest and hashed into the run id.
std::string config_snapshot(const AppConfig& config);

}  // namespace raceline
