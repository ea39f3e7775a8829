#include "raceline/manifest.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include <sys/utsname.h>

namespace raceline {

TimingStats compute_timing(const std::vector<double>& samples_ms) {
    TimingStats s;
    if (samples_ms.empty()) return s;
    double sum = 0.0;
    for (double v : samples_ms) {
        sum += v;
        s.max_ms = std::max(s.max_ms, v);
    }
    s.mean_ms = sum / static_cast<double>(samples_ms.size());
    return s;
}

RaceSummary summarize_race(const std::string& name, const std::string& csv_file,
                           const RaceLog& log) {
    RaceSummary s;
    s.name = name;
    s.csv_file = csv_file;
    s.overtake_time = extract_progress(log).overtake_time;

    std::vector<double> rear_ms, front_ms;
    rear_ms.reserve(log.records.size());
    front_ms.reserve(log.records.size());
    for (const RaceRecord& rec : log.records) {
        rear_ms.push_back(rec.rear_solve_ms);
        front_ms.push_back(rec.front_solve_ms);
        s.max_residual =
            std::max({s.max_residual, rec.rear_residual, rec.front_residual});
    }
    s.rear = compute_timing(rear_ms);
    s.front = compute_timing(front_ms);
    return s;
}

std::string fnv1a_hex(const std::string& data) {
    std::uint64_t hash = 14695981039346656037ull;
    for (unsigned char c : data) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

std::string platform_description() {
    utsname u{};
    std::string os = "unknown", machine = "unknown";
    if (uname(&u) == 0) {
        os = u.sysname;
        machine = u.machine;
    }
#if defined(__clang__)
    const std::string compiler = std::string("clang ") + __clang_version__;
#elif defined(__GNUC__)
    const std::string compiler = std::string("gcc ") + __VERSION__;
#else
    const std::string compiler = "unknown compiler";
#endif
    return os + " " + machine + ", " + compiler;
}

std::string manifest_to_json(const RunManifest& m) {
    nlohmann::json doc;
    doc["run_id"] = m.run_id;
    doc["version"] = m.version;
    doc["platform"] = m.platform;
    doc["command"] = m.command;
    doc["timing_measured"] = m.timing_measured;
    doc["config"] = nlohmann::json::parse(m.config_snapshot);
    doc["races"] = nlohmann::json::array();
    for (const RaceSummary& r : m.races) {
        nlohmann::json jr;
        jr["name"] = r.name;
        jr["csv_file"] = r.csv_file;
        if (r.overtake_time) {
            jr["overtake_time_s"] = *r.overtake_time;
        } else {
            jr["overtake_time_s"] = nullptr;
        }
        jr["rear_solve_ms"] = {{"mean", r.rear.mean_ms}, {"max", r.rear.max_ms}};
        jr["front_solve_ms"] = {{"mean", r.front.mean_ms}, {"max", r.front.max_ms}};
        jr["max_residual"] = r.max_residual;
        doc["races"].push_back(std::move(jr));
    }
    doc["artifacts"] = nlohmann::json::array();
    for (const auto& [file, hash] : m.artifacts) {
        doc["artifacts"].push_back({{"file", file}, {"hash", hash}});
    }
    return doc.dump(2) + "\n";
}

void write_manifest(const RunManifest& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot open '" + path + "' for writing");
    }
    out << manifest_to_json(m);
    if (!out) {
        throw Error("write to '" + path + "' failed");
    }
}

}  // namespace raceline
