#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "raceline/solver.hpp"

namespace raceline {

/// Controller assignment for one drone. Hover applies the constant
/// reference thrust with no optimization (used to exercise the harness
/// without closed-loop feedback).
enum class ControllerKind { Nmpc, Game, Hover };

std::string to_string(ControllerKind kind);
ControllerKind controller_kind_from_string(const std::string& name);

/// Everything one closed-loop race needs besides the path itself.
/// Benchmark default for the leading drone: twice the rear drone's input
/// weight, making the front more conservative about thrust deviations.
inline CostWeights front_weight_defaults() {
    CostWeights w;
    w.input = 40.0;
    return w;
}

struct RaceConfig {
    ControllerKind front_controller = ControllerKind::Game;
    ControllerKind rear_controller = ControllerKind::Nmpc;
    double rear_initial_theta = 0.0;
    double front_initial_theta = 1.0;
    CostWeights rear_weights;                              ///< input weight 20
    CostWeights front_weights = front_weight_defaults();   ///< input weight 40
    PotentialParams potential;
    DroneParams drone;
    double opponent_speed = 1.0;              ///< prediction-model parameter rate
    double duration = 20.0;                   ///< [s]
    double control_cycle = 1e-3;              ///< [s]
    HorizonDiscretization horizon;
    SolverParams solver;

    void validate() const {
        if (!(front_initial_theta > rear_initial_theta)) {
            throw ConfigError("front drone must start ahead of the rear drone");
        }
        if (!(duration > 0.0) || !(control_cycle > 0.0)) {
            throw ConfigError("race duration and control cycle must be positive");
        }
        drone.validate();
        rear_weights.validate();
        front_weights.validate();
        potential.validate();
        horizon.validate();
        solver.validate();
    }
};

/// True combined state of both drones.
struct PairState {
    AugmentedState rear;
    AugmentedState front;
};

/// One sample of the closed loop, taken every control cycle.
struct RaceRecord {
    double t = 0.0;
    AugmentedState rear, front;
    Eigen::Vector4d rear_input = Eigen::Vector4d::Zero();
    Eigen::Vector4d front_input = Eigen::Vector4d::Zero();
    double rear_residual = 0.0, front_residual = 0.0;
    double rear_solve_ms = 0.0, front_solve_ms = 0.0;
    double potential_rear = 0.0;   ///< shaping term seen by the rear drone
    double potential_front = 0.0;  ///< shaping term seen by the front drone
    double distance = 0.0;         ///< inter-drone distance [m]
};

struct RaceLog {
    std::vector<RaceRecord> records;
};

/// RK4 step of both drones' augmented dynamics over one control cycle,
/// with quaternion renormalization. The drones are dynamically decoupled;
/// coupling enters only through the controllers.
PairState step_plant(const PairState& x, const ControlInput& u_rear,
                     const ControlInput& u_front, double dt,
                     const ParametricPath& path, const DroneParams& params);

/// Run one full closed-loop race. Both drones start at rest on the path at
/// their configured parameters. Solver or projection failures propagate
/// with the failure time in the message.
RaceLog run_race(const RaceConfig& config, const ParametricPath& path);

/// Path-parameter progress of both drones plus the overtake instant: the
/// first sample at which the rear drone's parameter reaches the front's.
struct ProgressSeries {
    std::vector<double> time;
    std::vector<double> rear_theta;
    std::vector<double> front_theta;
    std::optional<double> overtake_time;
};

ProgressSeries extract_progress(const RaceLog& log);

}  // namespace raceline
