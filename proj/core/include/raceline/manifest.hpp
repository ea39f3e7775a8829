#pragma once

#include <optional>
#include <string>
#include <vector>

#include "raceline/race.hpp"

namespace raceline {

inline constexpr const char* library_version = "0.1.0";

/// Per-controller wall-clock statistics over one race, in milliseconds.
struct TimingStats {
    double mean_ms = 0.0;
    double max_ms = 0.0;
};

TimingStats compute_timing(const std::vector<double>& samples_ms);

/// Summary of one finished race as stored in the run manifest. The timing
/// statistics are computed from the exact per-update samples that the race
/// log (and hence the CSV artifact) carries.
struct RaceSummary {
    std::string name;       ///< pairing label, e.g. "race_D_M"
    std::string csv_file;   ///< artifact filename relative to the run directory
    std::optional<double> overtake_time;
    TimingStats rear;
    TimingStats front;
    double max_residual = 0.0;
};

RaceSummary summarize_race(const std::string& name, const std::string& csv_file,
                           const RaceLog& log);

/// Description of one run: which configuration produced which artifacts.
/// Artifacts are bound to the manifest by living in its run directory and
/// being enumerated here with a content hash.
struct RunManifest {
    std::string run_id;           ///< hash of the configuration snapshot
    std::string version;          ///< library version
    std::string platform;         ///< OS / architecture / compiler
    std::string command;          ///< CLI subcommand that produced the run
    bool timing_measured = true;  ///< false when invoked with --seedless
    std::string config_snapshot;  ///< canonical JSON of the resolved config
    std::vector<RaceSummary> races;
    std::vector<std::pair<std::string, std::string>> artifacts;  ///< (file, hash)
};

/// FNV-1a (64-bit) content hash, hex-encoded.
std::string fnv1a_hex(const std::string& data);

std::string platform_description();

std::string manifest_to_json(const RunManifest& manifest);

void write_manifest(const RunManifest& manifest, const std::string& path);

}  // namespace raceline
