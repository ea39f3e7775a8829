#pragma once

#include <string>

#include "raceline/race.hpp"

namespace raceline {

/// The fixed 46-column race-log schema: t, the rear drone's
/// {x,y,z,vx,vy,vz,w1,w2,w3,q0..q3,theta,sigma,F1..F4,residual,solve_ms},
/// the same block for the front drone, then potential_ego, potential_opp,
/// min_distance.
std::string race_csv_header();

/// Serialize with 17 significant digits so that read(write(log))
/// reproduces every double bit-exactly.
void write_race_csv(const RaceLog& log, const std::string& path);

/// Parse a race log. Throws SchemaMismatch on header or column-count
/// disagreement and ParseError (with line/column) on unparseable or
/// non-finite cells.
RaceLog read_race_csv(const std::string& path);

}  // namespace raceline
