#pragma once

#include <Eigen/Core>

#include "raceline/projection.hpp"

namespace raceline {

using Vec19 = Eigen::Matrix<double, 19, 1>;
using Vec30 = Eigen::Matrix<double, 30, 1>;

/// Weights of the path-following objective: quadratic position deviation,
/// quadratic body-rate damping, linear progress reward, and quadratic
/// input deviation about the hover reference.
struct CostWeights {
    Eigen::Vector3d position{1.0, 1.0, 1.0};
    Eigen::Vector3d body_rate{0.1, 0.1, 0.1};
    double progress = 0.5;
    double input = 20.0;
    double input_reference = 0.063 * 9.81 / 4.0;  ///< hover thrust per rotor [N]

    void validate() const {
        if (!(position.array() >= 0.0).all() || !(body_rate.array() >= 0.0).all() ||
            !(progress >= 0.0) || !(input > 0.0)) {
            throw ConfigError(
                "cost weights must be nonnegative with a positive input weight");
        }
    }
};

/// Shape of the overtaking/obstructing potential: a Gaussian bump in the
/// path-parameter gap, signed by a tanh crossover, decaying with the
/// squared deviation difference.
struct PotentialParams {
    double gaussian_width = 1.0;   ///< alpha
    double amplitude = 4.0;        ///< beta
    double lateral_decay = 5.0;    ///< gamma
    double gaussian_center = -0.5; ///< delta1
    double tanh_crossover = -1.0;  ///< delta2

    void validate() const {
        if (!(gaussian_width > 0.0) || !(amplitude > 0.0) || !(lateral_decay > 0.0)) {
            throw ConfigError("potential width, amplitude, and decay must be positive");
        }
    }
};

/// Constant-speed opponent model used by the single-sided controller:
/// the opponent is assumed to slide along the path at parameter rate
/// `speed`, its position following the tangent.
struct OpponentPrediction {
    Eigen::Vector3d position = Eigen::Vector3d::Zero();
    double theta = 0.0;
    double speed = 1.0;
};

/// State of the single-sided racing problem: own augmented state plus the
/// predicted opponent position and path parameter.
struct RacingState {
    AugmentedState ego;
    Eigen::Vector3d opponent_position = Eigen::Vector3d::Zero();
    double opponent_theta = 0.0;

    Vec19 pack() const {
        Vec19 x;
        x << ego.pack(), opponent_position, opponent_theta;
        return x;
    }
    static RacingState unpack(const Eigen::Ref<const Vec19>& x) {
        RacingState s;
        s.ego = AugmentedState::unpack(x.head<15>());
        s.opponent_position = x.segment<3>(15);
        s.opponent_theta = x(18);
        return s;
    }
};

/// State of the two-player game: both drones' augmented states. `ego` is
/// the minimizing player, `opponent` the maximizing one.
struct GameState {
    AugmentedState ego;
    AugmentedState opponent;

    Vec30 pack() const {
        Vec30 x;
        x << ego.pack(), opponent.pack();
        return x;
    }
    static GameState unpack(const Eigen::Ref<const Vec30>& x) {
        GameState s;
        s.ego = AugmentedState::unpack(x.head<15>());
        s.opponent = AugmentedState::unpack(x.tail<15>());
        return s;
    }
};

/// Path-following stage cost:
/// sum a_i (p_i - r_i(theta))^2 + sum a_{3+i} w_i^2 - a7 sigma
///   + sum b (u_i - u_ref)^2.
double stage_cost_pf(const AugmentedState& x, const ControlInput& u,
                     const CostWeights& w, const ParametricPath& path);

/// Terminal variant: stage_cost_pf without the input term.
double terminal_cost_pf(const AugmentedState& x, const CostWeights& w,
                        const ParametricPath& path);

/// Gradient of stage_cost_pf w.r.t. the packed augmented state.
Vec15 stage_cost_pf_gradient_x(const AugmentedState& x, const CostWeights& w,
                               const ParametricPath& path);

/// Gradient of stage_cost_pf w.r.t. the input.
Eigen::Vector4d stage_cost_pf_gradient_u(const ControlInput& u, const CostWeights& w);

/// (pdot_op, thetadot_op) of the constant-speed opponent model.
Eigen::Vector4d opponent_prediction_derivative(const OpponentPrediction& pred,
                                               const ParametricPath& path);

/// Overtaking/obstructing potential evaluated between the ego drone and an
/// opponent at (p_op, theta_op).
double potential(const AugmentedState& ego, const Eigen::Vector3d& p_op,
                 double theta_op, const PotentialParams& pp,
                 const ParametricPath& path);

/// Potential value together with its partial derivatives with respect to
/// both drones' positions and path parameters.
struct PotentialGradient {
    double value = 0.0;
    Eigen::Vector3d ego_position = Eigen::Vector3d::Zero();
    double ego_theta = 0.0;
    Eigen::Vector3d op_position = Eigen::Vector3d::Zero();
    double op_theta = 0.0;
};

PotentialGradient potential_with_gradient(const Eigen::Vector3d& p_ego,
                                          double theta_ego,
                                          const Eigen::Vector3d& p_op,
                                          double theta_op,
                                          const PotentialParams& pp,
                                          const ParametricPath& path);

/// Single-sided racing stage cost: path following plus the potential
/// against the predicted opponent.
double nmpc_stage_cost(const RacingState& x, const ControlInput& u,
                       const CostWeights& w, const PotentialParams& pp,
                       const ParametricPath& path);

double nmpc_terminal_cost(const RacingState& x, const CostWeights& w,
                          const PotentialParams& pp, const ParametricPath& path);

/// Zero-sum game stage cost:
/// L_pf(ego) + G(ego vs opp) - L_pf(opp) - G(opp vs ego).
double nrhdg_stage_cost(const GameState& x, const ControlInput& u_ego,
                        const ControlInput& u_op, const CostWeights& w_ego,
                        const CostWeights& w_op, const PotentialParams& pp,
                        const ParametricPath& path);

double nrhdg_terminal_cost(const GameState& x, const CostWeights& w_ego,
                           const CostWeights& w_op, const PotentialParams& pp,
                           const ParametricPath& path);

}  // namespace raceline
