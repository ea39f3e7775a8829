// Command-line front end: closed-loop races, the four-race comparison,
// a single-drone path-following demo, and SVG rendering of saved logs.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "raceline/compare.hpp"
#include "raceline/config.hpp"
#include "raceline/csv.hpp"
#include "raceline/manifest.hpp"
#include "raceline/svg.hpp"

namespace fs = std::filesystem;
using namespace raceline;

namespace {

struct CommonOptions {
    std::string config_file;
    std::string out_dir = "out";
    bool seedless = false;
};

struct LoadedConfig {
    AppConfig config;
    SinusoidPath path;
    std::string snapshot;
    std::string run_id;
};

LoadedConfig prepare(const CommonOptions& opts) {
    AppConfig cfg = load_config(opts.config_file);
    if (opts.seedless) {
        // Reproducibility mode: wall-clock measurement is the only
        // nondeterministic quantity in the pipeline, so it is pinned to 0.
        cfg.race.solver.measure_timing = false;
    }
    SinusoidPath path = cfg.make_path();
    std::string snapshot = config_snapshot(cfg);
    std::string run_id = fnv1a_hex(snapshot);
    fs::create_directories(opts.out_dir);
    return {std::move(cfg), std::move(path), std::move(snapshot), std::move(run_id)};
}

RunManifest base_manifest(const LoadedConfig& loaded, const CommonOptions& opts,
                          const std::string& command) {
    RunManifest m;
    m.run_id = loaded.run_id;
    m.version = library_version;
    m.platform = platform_description();
    m.command = command;
    m.timing_measured = !opts.seedless;
    m.config_snapshot = loaded.snapshot;
    return m;
}

std::string file_hash(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return fnv1a_hex(buf.str());
}

void add_artifact(RunManifest& m, const fs::path& dir, const std::string& name) {
    m.artifacts.emplace_back(name, file_hash(dir / name));
}

std::string pairing_name(const RaceConfig& rc) {
    return "race_" + to_string(rc.front_controller) + "_" + to_string(rc.rear_controller);
}

std::string error_kind(const std::exception& e) {
    if (dynamic_cast<const SingularProjection*>(&e)) return "singular_projection";
    if (dynamic_cast<const NoProjectionFound*>(&e)) return "no_projection_found";
    if (dynamic_cast<const NonFiniteResidual*>(&e)) return "non_finite_residual";
    if (dynamic_cast<const InitializationFailed*>(&e)) return "initialization_failed";
    if (dynamic_cast<const IncompleteRaces*>(&e)) return "incomplete_races";
    if (dynamic_cast<const SchemaMismatch*>(&e)) return "schema_mismatch";
    if (dynamic_cast<const ParseError*>(&e)) return "parse_error";
    if (dynamic_cast<const ConfigError*>(&e)) return "config_error";
    if (dynamic_cast<const Error*>(&e)) return "runtime_error";
    return "internal_error";
}

int fail_with_record(const std::exception& e) {
    nlohmann::json record = {{"error", error_kind(e)}, {"message", e.what()}};
    std::cerr << record.dump() << std::endl;
    return 1;
}

int cmd_race(const CommonOptions& opts, const std::string& pair) {
    LoadedConfig loaded = prepare(opts);
    if (!pair.empty()) {
        const auto comma = pair.find(',');
        if (comma == std::string::npos) {
            throw ConfigError("--pair expects FRONT,REAR (e.g. D,M)");
        }
        loaded.config.race.front_controller =
            controller_kind_from_string(pair.substr(0, comma));
        loaded.config.race.rear_controller =
            controller_kind_from_string(pair.substr(comma + 1));
    }

    const RaceLog log = run_race(loaded.config.race, loaded.path);
    const std::string name = pairing_name(loaded.config.race);
    const fs::path dir(opts.out_dir);
    write_race_csv(log, (dir / (name + ".csv")).string());

    RunManifest m = base_manifest(loaded, opts, "race");
    m.races.push_back(summarize_race(name, name + ".csv", log));
    add_artifact(m, dir, name + ".csv");
    write_manifest(m, (dir / "manifest.json").string());

    const auto& summary = m.races.front();
    if (summary.overtake_time) {
        std::printf("%s: overtake at t = %.3f s\n", name.c_str(), *summary.overtake_time);
    } else {
        std::printf("%s: no overtake within %.1f s\n", name.c_str(),
                    loaded.config.race.duration);
    }
    std::printf("logged %zu records to %s\n", log.records.size(),
                (dir / (name + ".csv")).string().c_str());
    return 0;
}

int cmd_compare(const CommonOptions& opts) {
    LoadedConfig loaded = prepare(opts);
    const fs::path dir(opts.out_dir);
    RunManifest m = base_manifest(loaded, opts, "compare");

    const ControllerKind kinds[2] = {ControllerKind::Nmpc, ControllerKind::Game};
    FourRaces races;
    RaceLog* slots[2][2] = {{&races.front_m_rear_m, &races.front_m_rear_d},
                            {&races.front_d_rear_m, &races.front_d_rear_d}};
    for (int f = 0; f < 2; ++f) {
        for (int r = 0; r < 2; ++r) {
            RaceConfig rc = loaded.config.race;
            rc.front_controller = kinds[f];
            rc.rear_controller = kinds[r];
            const std::string name = pairing_name(rc);
            std::printf("running %s ...\n", name.c_str());
            std::fflush(stdout);
            *slots[f][r] = run_race(rc, loaded.path);
            write_race_csv(*slots[f][r], (dir / (name + ".csv")).string());
            m.races.push_back(summarize_race(name, name + ".csv", *slots[f][r]));
            add_artifact(m, dir, name + ".csv");
        }
    }

    const ComparisonReport report = compare_races(races, loaded.config.comparison);
    write_text_file(report.format(), (dir / "report.txt").string());
    add_artifact(m, dir, "report.txt");
    write_manifest(m, (dir / "manifest.json").string());

    std::fputs(report.format().c_str(), stdout);
    std::printf("verdict: %s\n", report.all_pass() ? "pass" : "FAIL");
    return 0;
}

int cmd_project_demo(const CommonOptions& opts) {
    LoadedConfig loaded = prepare(opts);
    const RaceConfig& rc = loaded.config.race;
    const fs::path dir(opts.out_dir);

    AugmentedState state;
    state.drone.position = loaded.path.position(rc.rear_initial_theta);
    state.theta = solve_initial_projection(loaded.path, state.drone.position,
                                           rc.rear_initial_theta);

    PathFollowOcp model(rc.drone, rc.rear_weights, loaded.path);
    ContinuationSolver solver(model, rc.horizon, rc.solver);
    solver.initialize(state.pack(), 0.0);

    std::ofstream csv(dir / "demo.csv");
    if (!csv) throw Error("cannot open demo.csv for writing");
    csv << "t,x,y,z,vx,vy,vz,w1,w2,w3,q0,q1,q2,q3,theta,sigma,"
           "F1,F2,F3,F4,residual,solve_ms,stationarity,margin\n";

    const int steps =
        static_cast<int>(std::llround(rc.duration / rc.control_cycle));
    double max_stationarity = 0.0;
    char buf[32];
    for (int i = 0; i <= steps; ++i) {
        const double t = i * rc.control_cycle;
        const ControllerOutput out = solver.update(state.pack(), t, rc.control_cycle);

        const double stat =
            stationarity_residual(loaded.path, state.theta, state.drone.position);
        max_stationarity = std::max(max_stationarity, std::abs(stat));
        double row[24] = {t, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0,
                          state.theta, state.sigma, out.input(0), out.input(1),
                          out.input(2), out.input(3), out.residual_norm,
                          1e3 * out.solve_seconds, stat,
                          singularity_margin(loaded.path, state.theta,
                                             state.drone.position)};
        for (int k = 0; k < 3; ++k) {
            row[1 + k] = state.drone.position(k);
            row[4 + k] = state.drone.velocity(k);
            row[7 + k] = state.drone.body_rate(k);
        }
        for (int k = 0; k < 4; ++k) row[10 + k] = state.drone.quaternion(k);
        for (int k = 0; k < 24; ++k) {
            std::snprintf(buf, sizeof buf, "%.17g", row[k]);
            csv << (k ? "," : "") << buf;
        }
        csv << '\n';

        if (i < steps) {
            // Same RK4 plant as the race harness, single drone.
            const PairState stepped =
                step_plant(PairState{state, state}, ControlInput{out.input.head<4>()},
                           ControlInput{out.input.head<4>()}, rc.control_cycle,
                           loaded.path, rc.drone);
            state = stepped.rear;
        }
    }
    if (!csv) throw Error("write to demo.csv failed");
    csv.close();

    RunManifest m = base_manifest(loaded, opts, "project-demo");
    add_artifact(m, dir, "demo.csv");
    write_manifest(m, (dir / "manifest.json").string());

    std::printf("single-drone run: final theta = %.4f, sigma = %.4f m, "
                "max |stationarity| = %.3g\n",
                state.theta, state.sigma, max_stationarity);
    return 0;
}

int cmd_plot(const CommonOptions& opts) {
    LoadedConfig loaded = prepare(opts);
    const fs::path dir(opts.out_dir);
    RunManifest m = base_manifest(loaded, opts, "plot");

    // Render every race log present; remember the standard four for the
    // comparison figures.
    std::vector<std::pair<std::string, RaceLog>> found;
    for (const auto& entry : fs::directory_iterator(dir)) {
        const std::string fname = entry.path().filename().string();
        if (fname.rfind("race_", 0) == 0 && entry.path().extension() == ".csv") {
            found.emplace_back(fname.substr(0, fname.size() - 4),
                               read_race_csv(entry.path().string()));
        }
    }
    std::sort(found.begin(), found.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    if (found.empty()) {
        throw Error("no race_*.csv logs found in '" + dir.string() + "'");
    }

    std::vector<std::pair<std::string, const RaceLog*>> course_logs;
    for (const auto& [name, log] : found) {
        const std::string svg_name = name + ".svg";
        write_text_file(render_time_history(log, name, loaded.run_id),
                        (dir / svg_name).string());
        add_artifact(m, dir, svg_name);
        course_logs.emplace_back(name, &log);
    }

    write_text_file(render_course(loaded.path, course_logs, "course", loaded.run_id),
                    (dir / "course.svg").string());
    add_artifact(m, dir, "course.svg");

    const auto find_log = [&](const char* name) -> const RaceLog* {
        for (const auto& [n, log] : found) {
            if (n == name) return &log;
        }
        return nullptr;
    };
    const RaceLog* mm = find_log("race_M_M");
    const RaceLog* md = find_log("race_M_D");
    const RaceLog* dm = find_log("race_D_M");
    const RaceLog* dd = find_log("race_D_D");
    if (mm && md && dm && dd) {
        try {
            const ComparisonReport report = compare_races(
                FourRaces{*mm, *md, *dm, *dd}, loaded.config.comparison);
            const std::vector<const FractionResult*> figures = {
                &report.overtaking[0], &report.overtaking[1], &report.obstructing[0],
                &report.obstructing[1]};
            const char* names[] = {"overtaking_behind_M.svg", "overtaking_behind_D.svg",
                                   "obstructing_of_M.svg", "obstructing_of_D.svg"};
            for (std::size_t i = 0; i < figures.size(); ++i) {
                write_text_file(
                    render_progress_comparison(*figures[i], figures[i]->label,
                                               loaded.run_id),
                    (dir / names[i]).string());
                add_artifact(m, dir, names[i]);
            }
        } catch (const IncompleteRaces& e) {
            std::printf("skipping comparison figures: %s\n", e.what());
        }
    }

    write_manifest(m, (dir / "plot_manifest.json").string());
    std::printf("rendered %zu figures into %s\n", m.artifacts.size(),
                dir.string().c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quadrotor race simulation: path-following and racing "
                 "controllers on a closed course"};
    app.require_subcommand(1);

    CommonOptions opts;
    std::string pair;
    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opts.config_file, "configuration file (JSON)")
            ->required();
        sub->add_option("--out", opts.out_dir, "output directory (default: out)");
        sub->add_flag("--seedless", opts.seedless,
                      "reproducibility mode: pin wall-clock fields to zero so "
                      "repeated runs are byte-identical");
    };

    CLI::App* race = app.add_subcommand("race", "run one two-drone race");
    add_common(race);
    race->add_option("--pair", pair, "controllers as FRONT,REAR from {M, D, hover}");

    CLI::App* compare = app.add_subcommand(
        "compare", "run all four controller pairings and evaluate the comparison");
    add_common(compare);

    CLI::App* demo = app.add_subcommand(
        "project-demo", "single-drone path-following run with projection diagnostics");
    add_common(demo);

    CLI::App* plot =
        app.add_subcommand("plot", "render SVG figures from saved race logs");
    add_common(plot);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    // A malformed --pair is a usage error, not a runtime failure: reject it
    // before any work starts.
    if (race->parsed() && !pair.empty()) {
        try {
            const auto comma = pair.find(',');
            if (comma == std::string::npos) {
                throw ConfigError("--pair expects FRONT,REAR (e.g. D,M)");
            }
            controller_kind_from_string(pair.substr(0, comma));
            controller_kind_from_string(pair.substr(comma + 1));
        } catch (const std::exception& e) {
            std::cerr << "usage error: " << e.what() << std::endl;
            return 2;
        }
    }

    try {
        if (race->parsed()) return cmd_race(opts, pair);
        if (compare->parsed()) return cmd_compare(opts);
        if (demo->parsed()) return cmd_project_demo(opts);
        if (plot->parsed()) return cmd_plot(opts);
    } catch (const std::exception& e) {
        return fail_with_record(e);
    }
    return 2;
}
