#pragma once

#include <Eigen/Core>

#include "raceline/costs.hpp"

namespace raceline {

/// Continuous-time optimal control problem as consumed by the receding-
/// horizon solver: dynamics, their transposed Jacobian products (for the
/// costate sweep), and stage/terminal costs with analytic gradients.
///
/// For the two-player game the "input" is the stacked pair of both
/// players' inputs and the saddle condition is stationarity of the
/// Hamiltonian in that joint input.
class OcpModel {
public:
    using ConstVec = Eigen::Ref<const Eigen::VectorXd>;
    using MutVec = Eigen::Ref<Eigen::VectorXd>;

    virtual ~OcpModel() = default;

    virtual int state_dim() const = 0;
    virtual int input_dim() const = 0;

    virtual void dynamics(ConstVec x, ConstVec u, MutVec dx) const = 0;
    /// out = (df/dx)' lam
    virtual void dynamics_jacx_tmul(ConstVec x, ConstVec u, ConstVec lam,
                                    MutVec out) const = 0;
    /// out = (df/du)' lam
    virtual void dynamics_jacu_tmul(ConstVec x, ConstVec u, ConstVec lam,
                                    MutVec out) const = 0;

    virtual double stage_cost(ConstVec x, ConstVec u) const = 0;
    virtual void stage_cost_gradient_x(ConstVec x, ConstVec u, MutVec g) const = 0;
    virtual void stage_cost_gradient_u(ConstVec x, ConstVec u, MutVec g) const = 0;
    virtual double terminal_cost(ConstVec x) const = 0;
    virtual void terminal_cost_gradient_x(ConstVec x, MutVec g) const = 0;

    /// Equilibrium-ish input used to seed the solver (hover thrusts).
    virtual Eigen::VectorXd reference_input() const = 0;
};

/// Pure path following: 15 states (drone + theta + sigma), 4 inputs.
class PathFollowOcp final : public OcpModel {
public:
    PathFollowOcp(DroneParams params, CostWeights weights, const ParametricPath& path);

    int state_dim() const override { return 15; }
    int input_dim() const override { return 4; }
    void dynamics(ConstVec x, ConstVec u, MutVec dx) const override;
    void dynamics_jacx_tmul(ConstVec x, ConstVec u, ConstVec lam, MutVec out) const override;
    void dynamics_jacu_tmul(ConstVec x, ConstVec u, ConstVec lam, MutVec out) const override;
    double stage_cost(ConstVec x, ConstVec u) const override;
    void stage_cost_gradient_x(ConstVec x, ConstVec u, MutVec g) const override;
    void stage_cost_gradient_u(ConstVec x, ConstVec u, MutVec g) const override;
    double terminal_cost(ConstVec x) const override;
    void terminal_cost_gradient_x(ConstVec x, MutVec g) const override;
    Eigen::VectorXd reference_input() const override;

private:
    DroneParams params_;
    CostWeights weights_;
    const ParametricPath& path_;
};

/// Single-sided racing: 19 states (own augmented state + predicted
/// opponent position and parameter), 4 inputs. The opponent block evolves
/// at the configured constant parameter speed.
class RacingOcp final : public OcpModel {
public:
    RacingOcp(DroneParams params, CostWeights weights, PotentialParams potential,
              double opponent_speed, const ParametricPath& path);

    int state_dim() const override { return 19; }
    int input_dim() const override { return 4; }
    void dynamics(ConstVec x, ConstVec u, MutVec dx) const override;
    void dynamics_jacx_tmul(ConstVec x, ConstVec u, ConstVec lam, MutVec out) const override;
    void dynamics_jacu_tmul(ConstVec x, ConstVec u, ConstVec lam, MutVec out) const override;
    double stage_cost(ConstVec x, ConstVec u) const override;
    void stage_cost_gradient_x(ConstVec x, ConstVec u, MutVec g) const override;
    void stage_cost_gradient_u(ConstVec x, ConstVec u, MutVec g) const override;
    double terminal_cost(ConstVec x) const override;
    void terminal_cost_gradient_x(ConstVec x, MutVec g) const override;
    Eigen::VectorXd reference_input() const override;

private:
    DroneParams params_;
    CostWeights weights_;
    PotentialParams potential_;
    double opponent_speed_;
    const ParametricPath& path_;
};

/// Two-player zero-sum game: 30 states (both augmented states), 8 inputs
/// (ego thrusts then opponent thrusts). The ego minimizes, the opponent
/// maximizes; stationarity in the joint input characterizes the saddle.
class GameOcp final : public OcpModel {
public:
    GameOcp(DroneParams params, CostWeights ego_weights, CostWeights opponent_weights,
            PotentialParams potential, const ParametricPath& path);

    int state_dim() const override { return 30; }
    int input_dim() const override { return 8; }
    void dynamics(ConstVec x, ConstVec u, MutVec dx) const override;
    void dynamics_jacx_tmul(ConstVec x, ConstVec u, ConstVec lam, MutVec out) const override;
    void dynamics_jacu_tmul(ConstVec x, ConstVec u, ConstVec lam, MutVec out) const override;
    double stage_cost(ConstVec x, ConstVec u) const override;
    void stage_cost_gradient_x(ConstVec x, ConstVec u, MutVec g) const override;
    void stage_cost_gradient_u(ConstVec x, ConstVec u, MutVec g) const override;
    double terminal_cost(ConstVec x) const override;
    void terminal_cost_gradient_x(ConstVec x, MutVec g) const override;
    Eigen::VectorXd reference_input() const override;

private:
    DroneParams params_;
    CostWeights ego_weights_;
    CostWeights opponent_weights_;
    PotentialParams potential_;
    const ParametricPath& path_;
};

}  // namespace raceline
