#pragma once

#include <string>
#include <utility>
#include <vector>

#include "raceline/compare.hpp"

namespace raceline {

/// Static, deterministic SVG renderers. Every figure embeds the run id of
/// the manifest that produced its data as an XML comment so artifacts stay
/// traceable to their run.

/// Three stacked panels: path-parameter progress of both drones, the
/// inter-drone distance, and both shaping-term values over time.
std::string render_time_history(const RaceLog& log, const std::string& title,
                                const std::string& run_id);

/// Isometric projection of the course with the flown position traces.
std::string render_course(const ParametricPath& path,
                          const std::vector<std::pair<std::string, const RaceLog*>>& logs,
                          const std::string& title, const std::string& run_id);

/// Progress-difference series of one pairwise comparison, with its verdict.
std::string render_progress_comparison(const FractionResult& result,
                                       const std::string& title,
                                       const std::string& run_id);

void write_text_file(const std::string& content, const std::string& path);

}  // namespace raceline
