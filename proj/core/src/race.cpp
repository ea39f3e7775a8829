#include "raceline/race.hpp"

#include <cmath>
#include <memory>

namespace raceline {

std::string to_string(ControllerKind kind) {
    switch (kind) {
        case ControllerKind::Nmpc: return "M";
        case ControllerKind::Game: return "D";
        case ControllerKind::Hover: return "hover";
    }
    return "?";
}

ControllerKind controller_kind_from_string(const std::string& name) {
    if (name == "M" || name == "nmpc") return ControllerKind::Nmpc;
    if (name == "D" || name == "nrhdg") return ControllerKind::Game;
    if (name == "hover") return ControllerKind::Hover;
    throw ConfigError("unknown controller '" + name + "' (expected M, D, or hover)");
}

namespace {

AugmentedState rk4_step(const AugmentedState& s, const ControlInput& u, double dt,
                        const ParametricPath& path, const DroneParams& prm) {
    const Vec15 x0 = s.pack();
    const Vec15 k1 = augmented_derivative(s, u, path, prm);
    const Vec15 k2 =
        augmented_derivative(AugmentedState::unpack(x0 + 0.5 * dt * k1), u, path, prm);
    const Vec15 k3 =
        augmented_derivative(AugmentedState::unpack(x0 + 0.5 * dt * k2), u, path, prm);
    const Vec15 k4 =
        augmented_derivative(AugmentedState::unpack(x0 + dt * k3), u, path, prm);
    AugmentedState out =
        AugmentedState::unpack(x0 + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
    out.drone.renormalize();
    return out;
}

// One drone's controller: wraps the solver (or the hover fallback) and
// assembles the controller-specific composite state from the measured pair.
class DroneController {
public:
    // `own_is_rear` fixes which half of the measured PairState is "self".
    DroneController(ControllerKind kind, bool own_is_rear, const RaceConfig& cfg,
                    const ParametricPath& path)
        : kind_(kind), own_is_rear_(own_is_rear), path_(path), params_(cfg.drone) {
        const CostWeights& own = own_is_rear ? cfg.rear_weights : cfg.front_weights;
        const CostWeights& other = own_is_rear ? cfg.front_weights : cfg.rear_weights;
        switch (kind_) {
            case ControllerKind::Nmpc:
                model_ = std::make_unique<RacingOcp>(cfg.drone, own, cfg.potential,
                                                     cfg.opponent_speed, path);
                break;
            case ControllerKind::Game:
                model_ = std::make_unique<GameOcp>(cfg.drone, own, other, cfg.potential,
                                                  path);
                break;
            case ControllerKind::Hover:
                break;
        }
        if (model_) {
            solver_ = std::make_unique<ContinuationSolver>(*model_, cfg.horizon,
                                                           cfg.solver);
        }
        opponent_theta_estimate_ =
            own_is_rear ? cfg.front_initial_theta : cfg.rear_initial_theta;
    }

    void initialize(const PairState& measured, double t) {
        if (solver_) solver_->initialize(composite_state(measured), t);
    }

    ControllerOutput update(const PairState& measured, double t, double dt) {
        if (!solver_) {
            ControllerOutput out;
            out.input = Eigen::Vector4d::Constant(params_.hover_thrust());
            out.trajectory = out.input;
            return out;
        }
        return solver_->update(composite_state(measured), t, dt);
    }

private:
    Eigen::VectorXd composite_state(const PairState& measured) {
        const AugmentedState& own = own_is_rear_ ? measured.rear : measured.front;
        const AugmentedState& opp = own_is_rear_ ? measured.front : measured.rear;
        if (kind_ == ControllerKind::Game) {
            return GameState{own, opp}.pack();
        }
        // The one-sided controller carries only the opponent's position and
        // parameter; the parameter is re-projected from the measured
        // position each cycle, tracking the previously estimated branch.
        opponent_theta_estimate_ = solve_initial_projection(
            path_, opp.drone.position, opponent_theta_estimate_);
        return RacingState{own, opp.drone.position, opponent_theta_estimate_}.pack();
    }

    ControllerKind kind_;
    bool own_is_rear_;
    const ParametricPath& path_;
    DroneParams params_;
    std::unique_ptr<OcpModel> model_;
    std::unique_ptr<ContinuationSolver> solver_;
    double opponent_theta_estimate_ = 0.0;
};

AugmentedState rest_on_path(const ParametricPath& path, double theta) {
    AugmentedState s;
    s.drone.position = path.position(theta);
    s.theta = solve_initial_projection(path, s.drone.position, theta);
    s.sigma = 0.0;
    return s;
}

}  // namespace

PairState step_plant(const PairState& x, const ControlInput& u_rear,
                     const ControlInput& u_front, double dt, const ParametricPath& path,
                     const DroneParams& params) {
    return PairState{rk4_step(x.rear, u_rear, dt, path, params),
                     rk4_step(x.front, u_front, dt, path, params)};
}

RaceLog run_race(const RaceConfig& config, const ParametricPath& path) {
    config.validate();

    PairState state{rest_on_path(path, config.rear_initial_theta),
                    rest_on_path(path, config.front_initial_theta)};

    DroneController rear(config.rear_controller, true, config, path);
    DroneController front(config.front_controller, false, config, path);
    rear.initialize(state, 0.0);
    front.initialize(state, 0.0);

    const int steps = static_cast<int>(std::llround(config.duration / config.control_cycle));
    RaceLog log;
    log.records.reserve(steps + 1);

    double t = 0.0;
    try {
        for (int i = 0; i <= steps; ++i) {
            t = i * config.control_cycle;
            const ControllerOutput rear_out = rear.update(state, t, config.control_cycle);
            const ControllerOutput front_out =
                front.update(state, t, config.control_cycle);

            RaceRecord rec;
            rec.t = t;
            rec.rear = state.rear;
            rec.front = state.front;
            rec.rear_input = rear_out.input.head<4>();
            rec.front_input = front_out.input.head<4>();
            rec.rear_residual = rear_out.residual_norm;
            rec.front_residual = front_out.residual_norm;
            rec.rear_solve_ms = 1e3 * rear_out.solve_seconds;
            rec.front_solve_ms = 1e3 * front_out.solve_seconds;
            rec.potential_rear = potential(state.rear, state.front.drone.position,
                                           state.front.theta, config.potential, path);
            rec.potential_front = potential(state.front, state.rear.drone.position,
                                            state.rear.theta, config.potential, path);
            rec.distance =
                (state.rear.drone.position - state.front.drone.position).norm();
            log.records.push_back(std::move(rec));

            if (i < steps) {
                state = step_plant(state, ControlInput{rec.rear_input},
                                   ControlInput{rec.front_input}, config.control_cycle,
                                   path, config.drone);
            }
        }
    } catch (const SingularProjection& e) {
        throw SingularProjection(e.theta(), e.denominator(), t);
    } catch (const NonFiniteResidual& e) {
        throw NonFiniteResidual(std::string(e.what()) + " [race aborted at t=" +
                                std::to_string(t) + " s]");
    } catch (const NoProjectionFound& e) {
        throw NoProjectionFound(std::string(e.what()) + " [race aborted at t=" +
                                std::to_string(t) + " s]");
    }
    return log;
}

ProgressSeries extract_progress(const RaceLog& log) {
    ProgressSeries out;
    out.time.reserve(log.records.size());
    out.rear_theta.reserve(log.records.size());
    out.front_theta.reserve(log.records.size());
    for (const RaceRecord& rec : log.records) {
        out.time.push_back(rec.t);
        out.rear_theta.push_back(rec.rear.theta);
        out.front_theta.push_back(rec.front.theta);
        if (!out.overtake_time && rec.rear.theta >= rec.front.theta) {
            out.overtake_time = rec.t;
        }
    }
    return out;
}

}  // namespace raceline
