#include "raceline/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace raceline {

namespace {

using nlohmann::json;

void require_object(const json& j, const std::string& where) {
    if (!j.is_object()) {
        throw ConfigError(where + " must be a JSON object");
    }
}

void reject_unknown_keys(const json& j, std::initializer_list<const char*> allowed,
                         const std::string& where) {
    for (const auto& [key, value] : j.items()) {
        (void)value;
        bool known = false;
        for (const char* a : allowed) {
            if (key == a) {
                known = true;
                break;
            }
        }
        if (!known) {
            throw ConfigError("unknown key '" + key + "' in " + where);
        }
    }
}

double get_number(const json& j, const char* key, double fallback,
                  const std::string& where) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_number()) {
        throw ConfigError(where + "." + key + " must be a number");
    }
    return v.get<double>();
}

int get_int(const json& j, const char* key, int fallback, const std::string& where) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_number_integer()) {
        throw ConfigError(where + "." + key + " must be an integer");
    }
    return v.get<int>();
}

Eigen::Vector3d get_vec3(const json& j, const char* key, const Eigen::Vector3d& fallback,
                         const std::string& where) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_array() || v.size() != 3 ||
        !std::all_of(v.begin(), v.end(), [](const json& e) { return e.is_number(); })) {
        throw ConfigError(where + "." + key + " must be an array of three numbers");
    }
    return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

std::string get_string(const json& j, const char* key, const std::string& fallback,
                       const std::string& where) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_string()) {
        throw ConfigError(where + "." + key + " must be a string");
    }
    return v.get<std::string>();
}

void parse_drone(const json& j, DroneParams& p) {
    require_object(j, "drone");
    reject_unknown_keys(
        j, {"mass", "gravity", "arm_length", "inertia", "torque_thrust"}, "drone");
    p.mass = get_number(j, "mass", p.mass, "drone");
    p.gravity = get_number(j, "gravity", p.gravity, "drone");
    p.arm_length = get_number(j, "arm_length", p.arm_length, "drone");
    p.inertia = get_vec3(j, "inertia", p.inertia, "drone");
    p.torque_thrust = get_number(j, "torque_thrust", p.torque_thrust, "drone");
}

void parse_weights(const json& j, CostWeights& rear, CostWeights& front) {
    require_object(j, "weights");
    reject_unknown_keys(
        j, {"position", "body_rate", "progress", "rear_input", "front_input"}, "weights");
    rear.position = front.position = get_vec3(j, "position", rear.position, "weights");
    rear.body_rate = front.body_rate = get_vec3(j, "body_rate", rear.body_rate, "weights");
    rear.progress = front.progress = get_number(j, "progress", rear.progress, "weights");
    rear.input = get_number(j, "rear_input", rear.input, "weights");
    front.input = get_number(j, "front_input", front.input, "weights");
}

void parse_potential(const json& j, PotentialParams& p) {
    require_object(j, "potential");
    reject_unknown_keys(j,
                        {"gaussian_width", "amplitude", "lateral_decay",
                         "gaussian_center", "tanh_crossover"},
                        "potential");
    p.gaussian_width = get_number(j, "gaussian_width", p.gaussian_width, "potential");
    p.amplitude = get_number(j, "amplitude", p.amplitude, "potential");
    p.lateral_decay = get_number(j, "lateral_decay", p.lateral_decay, "potential");
    p.gaussian_center = get_number(j, "gaussian_center", p.gaussian_center, "potential");
    p.tanh_crossover = get_number(j, "tanh_crossover", p.tanh_crossover, "potential");
}

void parse_path(const json& j, AppConfig& cfg) {
    require_object(j, "path");
    reject_unknown_keys(j, {"name", "theta_min", "theta_max", "axes"}, "path");
    cfg.path_name = get_string(j, "name", cfg.path_name, "path");
    cfg.theta_min = get_number(j, "theta_min", cfg.theta_min, "path");
    cfg.theta_max = get_number(j, "theta_max", cfg.theta_max, "path");
    if (cfg.path_name == "paper-course") {
        if (j.contains("axes")) {
            throw ConfigError("path.axes is only valid with path.name = \"custom\"");
        }
        return;
    }
    if (cfg.path_name != "custom") {
        throw ConfigError("path.name must be \"paper-course\" or \"custom\"");
    }
    if (!j.contains("axes")) {
        throw ConfigError("path.name = \"custom\" requires path.axes");
    }
    const json& axes = j.at("axes");
    if (!axes.is_array() || axes.size() != 3) {
        throw ConfigError("path.axes must be an array of three term lists");
    }
    for (int a = 0; a < 3; ++a) {
        const json& terms = axes[a];
        if (!terms.is_array()) {
            throw ConfigError("path.axes[" + std::to_string(a) +
                              "] must be an array of terms");
        }
        for (const json& t : terms) {
            require_object(t, "path term");
            reject_unknown_keys(t, {"amplitude", "frequency", "phase"}, "path term");
            cfg.path_terms[a].push_back(
                {get_number(t, "amplitude", 0.0, "path term"),
                 get_number(t, "frequency", 0.0, "path term"),
                 get_number(t, "phase", 0.0, "path term")});
        }
    }
}

void parse_race(const json& j, RaceConfig& r) {
    require_object(j, "race");
    reject_unknown_keys(j,
                        {"front", "rear", "rear_initial_theta", "front_initial_theta",
                         "duration", "control_cycle", "opponent_speed"},
                        "race");
    r.front_controller =
        controller_kind_from_string(get_string(j, "front", "D", "race"));
    r.rear_controller = controller_kind_from_string(get_string(j, "rear", "M", "race"));
    r.rear_initial_theta = get_number(j, "rear_initial_theta", r.rear_initial_theta, "race");
    r.front_initial_theta =
        get_number(j, "front_initial_theta", r.front_initial_theta, "race");
    r.duration = get_number(j, "duration", r.duration, "race");
    r.control_cycle = get_number(j, "control_cycle", r.control_cycle, "race");
    r.opponent_speed = get_number(j, "opponent_speed", r.opponent_speed, "race");
}

void parse_horizon(const json& j, HorizonDiscretization& h) {
    require_object(j, "horizon");
    reject_unknown_keys(j, {"length", "stages"}, "horizon");
    h.horizon = get_number(j, "length", h.horizon, "horizon");
    h.stages = get_int(j, "stages", h.stages, "horizon");
}

void parse_solver(const json& j, SolverParams& s, bool& zeta_given) {
    require_object(j, "solver");
    reject_unknown_keys(j,
                        {"continuation_gain", "fd_step", "krylov_dim", "krylov_restarts",
                         "newton_tolerance", "newton_acceptable",
                         "newton_max_iterations"},
                        "solver");
    zeta_given = j.contains("continuation_gain");
    s.continuation_gain = get_number(j, "continuation_gain", s.continuation_gain, "solver");
    s.fd_step = get_number(j, "fd_step", s.fd_step, "solver");
    s.krylov_dim = get_int(j, "krylov_dim", s.krylov_dim, "solver");
    s.krylov_restarts = get_int(j, "krylov_restarts", s.krylov_restarts, "solver");
    s.newton_tolerance = get_number(j, "newton_tolerance", s.newton_tolerance, "solver");
    s.newton_acceptable = get_number(j, "newton_acceptable", s.newton_acceptable, "solver");
    s.newton_max_iterations =
        get_int(j, "newton_max_iterations", s.newton_max_iterations, "solver");
}

void parse_comparison(const json& j, ComparisonThresholds& c) {
    require_object(j, "comparison");
    reject_unknown_keys(
        j, {"window_start", "overtaking_fraction", "obstructing_fraction"}, "comparison");
    c.window_start = get_number(j, "window_start", c.window_start, "comparison");
    c.overtaking_fraction =
        get_number(j, "overtaking_fraction", c.overtaking_fraction, "comparison");
    c.obstructing_fraction =
        get_number(j, "obstructing_fraction", c.obstructing_fraction, "comparison");
}

json terms_to_json(const SinusoidPath::AxisTerms& terms) {
    json arr = json::array();
    for (const auto& t : terms) {
        arr.push_back({{"amplitude", t.amplitude},
                       {"frequency", t.frequency},
                       {"phase", t.phase}});
    }
    return arr;
}

}  // namespace

SinusoidPath AppConfig::make_path() const {
    if (path_name == "paper-course") {
        return race_course(theta_min, theta_max);
    }
    return SinusoidPath(path_terms, theta_min, theta_max);
}

void AppConfig::validate() const {
    race.validate();
    comparison.validate();
    make_path();  // rejects degenerate custom curves
    if (!(theta_min <= race.rear_initial_theta) ||
        !(race.front_initial_theta <= theta_max)) {
        throw ConfigError("initial path parameters must lie inside the path interval");
    }
}

AppConfig parse_config(const std::string& json_text, const std::string& source) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(source + ": " + e.what());
    }
    require_object(doc, source);
    reject_unknown_keys(doc,
                        {"drone", "path", "weights", "potential", "race", "horizon",
                         "solver", "comparison"},
                        source);

    AppConfig cfg;
    if (doc.contains("drone")) parse_drone(doc.at("drone"), cfg.race.drone);
    if (doc.contains("path")) parse_path(doc.at("path"), cfg);
    if (doc.contains("weights")) {
        parse_weights(doc.at("weights"), cfg.race.rear_weights, cfg.race.front_weights);
    }
    if (doc.contains("potential")) parse_potential(doc.at("potential"), cfg.race.potential);
    if (doc.contains("race")) parse_race(doc.at("race"), cfg.race);
    if (doc.contains("horizon")) parse_horizon(doc.at("horizon"), cfg.race.horizon);
    bool zeta_given = false;
    if (doc.contains("solver")) parse_solver(doc.at("solver"), cfg.race.solver, zeta_given);
    if (doc.contains("comparison")) parse_comparison(doc.at("comparison"), cfg.comparison);

    // The hover reference thrust follows the drone parameters, and the
    // default continuation gain is the reciprocal of the control cycle.
    cfg.race.rear_weights.input_reference = cfg.race.drone.hover_thrust();
    cfg.race.front_weights.input_reference = cfg.race.drone.hover_thrust();
    if (!zeta_given) {
        cfg.race.solver.continuation_gain = 1.0 / cfg.race.control_cycle;
    }

    cfg.validate();
    return cfg;
}

AppConfig load_config(const std::string& file) {
    std::ifstream in(file);
    if (!in) {
        throw ConfigError("cannot open configuration file '" + file + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), file);
}

std::string config_snapshot(const AppConfig& cfg) {
    const auto vec3 = [](const Eigen::Vector3d& v) {
        return json::array({v(0), v(1), v(2)});
    };
    json doc;
    doc["drone"] = {{"mass", cfg.race.drone.mass},
                    {"gravity", cfg.race.drone.gravity},
                    {"arm_length", cfg.race.drone.arm_length},
                    {"inertia", vec3(cfg.race.drone.inertia)},
                    {"torque_thrust", cfg.race.drone.torque_thrust}};
    json path = {{"name", cfg.path_name},
                 {"theta_min", cfg.theta_min},
                 {"theta_max", cfg.theta_max}};
    if (cfg.path_name == "custom") {
        path["axes"] = json::array({terms_to_json(cfg.path_terms[0]),
                                    terms_to_json(cfg.path_terms[1]),
                                    terms_to_json(cfg.path_terms[2])});
    }
    doc["path"] = std::move(path);
    doc["weights"] = {{"position", vec3(cfg.race.rear_weights.position)},
                      {"body_rate", vec3(cfg.race.rear_weights.body_rate)},
                      {"progress", cfg.race.rear_weights.progress},
                      {"rear_input", cfg.race.rear_weights.input},
                      {"front_input", cfg.race.front_weights.input},
                      {"input_reference", cfg.race.rear_weights.input_reference}};
    doc["potential"] = {{"gaussian_width", cfg.race.potential.gaussian_width},
                        {"amplitude", cfg.race.potential.amplitude},
                        {"lateral_decay", cfg.race.potential.lateral_decay},
                        {"gaussian_center", cfg.race.potential.gaussian_center},
                        {"tanh_crossover", cfg.race.potential.tanh_crossover}};
    doc["race"] = {{"front", to_string(cfg.race.front_controller)},
                   {"rear", to_string(cfg.race.rear_controller)},
                   {"rear_initial_theta", cfg.race.rear_initial_theta},
                   {"front_initial_theta", cfg.race.front_initial_theta},
                   {"duration", cfg.race.duration},
                   {"control_cycle", cfg.race.control_cycle},
                   {"opponent_speed", cfg.race.opponent_speed}};
    doc["horizon"] = {{"length", cfg.race.horizon.horizon},
                      {"stages", cfg.race.horizon.stages}};
    doc["solver"] = {{"continuation_gain", cfg.race.solver.continuation_gain},
                     {"fd_step", cfg.race.solver.fd_step},
                     {"krylov_dim", cfg.race.solver.krylov_dim},
                     {"krylov_restarts", cfg.race.solver.krylov_restarts},
                     {"newton_tolerance", cfg.race.solver.newton_tolerance},
                     {"newton_acceptable", cfg.race.solver.newton_acceptable},
                     {"newton_max_iterations", cfg.race.solver.newton_max_iterations}};
    doc["comparison"] = {{"window_start", cfg.comparison.window_start},
                         {"overtaking_fraction", cfg.comparison.overtaking_fraction},
                         {"obstructing_fraction", cfg.comparison.obstructing_fraction}};
    return doc.dump(2);
}

}  // namespace raceline
