#include "raceline/csv.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

namespace raceline {

namespace {

constexpr int kColumns = 46;

const char* const kDroneFields[] = {"x",  "y",  "z",  "vx",    "vy",    "vz",
                                    "w1", "w2", "w3", "q0",    "q1",    "q2",
                                    "q3", "theta", "sigma", "F1", "F2", "F3",
                                    "F4", "residual", "solve_ms"};

void append_drone_values(const AugmentedState& s, const Eigen::Vector4d& input,
                         double residual, double solve_ms, std::vector<double>& row) {
    for (int i = 0; i < 3; ++i) row.push_back(s.drone.position(i));
    for (int i = 0; i < 3; ++i) row.push_back(s.drone.velocity(i));
    for (int i = 0; i < 3; ++i) row.push_back(s.drone.body_rate(i));
    for (int i = 0; i < 4; ++i) row.push_back(s.drone.quaternion(i));
    row.push_back(s.theta);
    row.push_back(s.sigma);
    for (int i = 0; i < 4; ++i) row.push_back(input(i));
    row.push_back(residual);
    row.push_back(solve_ms);
}

void read_drone_values(const double* v, AugmentedState& s, Eigen::Vector4d& input,
                       double& residual, double& solve_ms) {
    for (int i = 0; i < 3; ++i) s.drone.position(i) = v[i];
    for (int i = 0; i < 3; ++i) s.drone.velocity(i) = v[3 + i];
    for (int i = 0; i < 3; ++i) s.drone.body_rate(i) = v[6 + i];
    for (int i = 0; i < 4; ++i) s.drone.quaternion(i) = v[9 + i];
    s.theta = v[13];
    s.sigma = v[14];
    for (int i = 0; i < 4; ++i) input(i) = v[15 + i];
    residual = v[19];
    solve_ms = v[20];
}

}  // namespace

std::string race_csv_header() {
    std::string h = "t";
    for (const char* prefix : {"rear_", "front_"}) {
        for (const char* field : kDroneFields) {
            h += ',';
            h += prefix;
            h += field;
        }
    }
    h += ",potential_ego,potential_opp,min_distance";
    return h;
}

void write_race_csv(const RaceLog& log, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot open '" + path + "' for writing");
    }
    out << race_csv_header() << '\n';

    char buf[32];
    std::vector<double> row;
    row.reserve(kColumns);
    for (const RaceRecord& rec : log.records) {
        row.clear();
        row.push_back(rec.t);
        append_drone_values(rec.rear, rec.rear_input, rec.rear_residual,
                            rec.rear_solve_ms, row);
        append_drone_values(rec.front, rec.front_input, rec.front_residual,
                            rec.front_solve_ms, row);
        row.push_back(rec.potential_rear);
        row.push_back(rec.potential_front);
        row.push_back(rec.distance);

        for (std::size_t i = 0; i < row.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", row[i]);
            if (i) out << ',';
            out << buf;
        }
        out << '\n';
    }
    if (!out) {
        throw Error("write to '" + path + "' failed");
    }
}

RaceLog read_race_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open '" + path + "' for reading");
    }

    std::string line;
    if (!std::getline(in, line)) {
        throw SchemaMismatch("'" + path + "' is empty (missing header)");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != race_csv_header()) {
        throw SchemaMismatch("'" + path + "' header does not match the race-log schema");
    }

    RaceLog log;
    double values[kColumns];
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        int col = 0;
        std::size_t pos = 0;
        while (true) {
            const std::size_t comma = line.find(',', pos);
            const std::string cell = line.substr(
                pos, comma == std::string::npos ? std::string::npos : comma - pos);
            if (col >= kColumns) {
                throw SchemaMismatch("'" + path + "' line " + std::to_string(line_no) +
                                     " has more than " + std::to_string(kColumns) +
                                     " columns");
            }
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            if (cell.empty() || end != cell.c_str() + cell.size()) {
                throw ParseError("unparseable cell '" + cell + "'", line_no, col + 1);
            }
            if (!std::isfinite(v)) {
                throw ParseError("non-finite cell '" + cell + "'", line_no, col + 1);
            }
            values[col++] = v;
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (col != kColumns) {
            throw SchemaMismatch("'" + path + "' line " + std::to_string(line_no) +
                                 " has " + std::to_string(col) + " columns, expected " +
                                 std::to_string(kColumns));
        }

        RaceRecord rec;
        rec.t = values[0];
        read_drone_values(values + 1, rec.rear, rec.rear_input, rec.rear_residual,
                          rec.rear_solve_ms);
        read_drone_values(values + 22, rec.front, rec.front_input, rec.front_residual,
                          rec.front_solve_ms);
        rec.potential_rear = values[43];
        rec.potential_front = values[44];
        rec.distance = values[45];
        log.records.push_back(std::move(rec));
    }
    return log;
}

}  // namespace raceline
