#include "raceline/ocp.hpp"

#include <cmath>

#include <Eigen/Geometry>

namespace raceline {

namespace {

using ConstVec = OcpModel::ConstVec;
using MutVec = OcpModel::MutVec;

// Shared per-call data of one 15-dimensional augmented block, laid out as
// (p, v, omega, q, theta, sigma) within a larger state vector.
struct BlockEval {
    PathPoint pt;
    double denom;  // projection-rate denominator
};

BlockEval eval_block(const ParametricPath& path, double theta, const Eigen::Vector3d& p) {
    BlockEval b{path.eval(theta), 0.0};
    b.denom = b.pt.dr.squaredNorm() + (b.pt.r - p).dot(b.pt.ddr);
    if (b.denom <= 1e-6 * b.pt.dr.squaredNorm()) {
        throw SingularProjection(theta, b.denom);
    }
    return b;
}

void block_dynamics(const ParametricPath& path, const DroneParams& prm,
                    const Eigen::Matrix<double, 3, 4>& mixer, ConstVec x, ConstVec u,
                    MutVec dx) {
    const Eigen::Vector3d p = x.segment<3>(0);
    const Eigen::Vector3d v = x.segment<3>(3);
    const Eigen::Vector3d w = x.segment<3>(6);
    const Eigen::Vector4d q = x.segment<4>(9);

    const BlockEval b = eval_block(path, x(13), p);

    dx.segment<3>(0) = v;
    dx.segment<3>(3) =
        thrust_axis(q) * (u.sum() / prm.mass) - Eigen::Vector3d(0.0, 0.0, prm.gravity);
    const Eigen::Vector3d Jw = prm.inertia.cwiseProduct(w);
    dx.segment<3>(6) = (mixer * u.head<4>() - w.cross(Jw)).cwiseQuotient(prm.inertia);
    dx.segment<4>(9) = quaternion_rate(q, w);
    const double theta_dot = v.dot(b.pt.dr) / b.denom;
    dx(13) = theta_dot;
    dx(14) = b.pt.dr.norm() * theta_dot;
}

void block_jacx_tmul(const ParametricPath& path, const DroneParams& prm, ConstVec x,
                     ConstVec u, ConstVec lam, MutVec out) {
    const Eigen::Vector3d p = x.segment<3>(0);
    const Eigen::Vector3d v = x.segment<3>(3);
    const Eigen::Vector3d w = x.segment<3>(6);
    const Eigen::Vector4d q = x.segment<4>(9);

    const BlockEval b = eval_block(path, x(13), p);
    const PathPoint& pt = b.pt;
    const double D = b.denom;

    const double n = v.dot(pt.dr);
    const double n_prime = v.dot(pt.ddr);
    const double D_prime = 3.0 * pt.dr.dot(pt.ddr) + (pt.r - p).dot(pt.dddr);
    const double s1 = pt.dr.norm();
    const double s1_prime = pt.dr.dot(pt.ddr) / s1;
    const double dthdot_dtheta = n_prime / D - n * D_prime / (D * D);

    const Eigen::Vector3d lam_p = lam.segment<3>(0);
    const Eigen::Vector3d lam_v = lam.segment<3>(3);
    const Eigen::Vector3d lam_w = lam.segment<3>(6);
    const Eigen::Vector4d lam_q = lam.segment<4>(9);
    const double lam_theta = lam(13);
    const double lam_sigma = lam(14);

    // The arc-length row is s1 times the theta row, so both costates enter
    // the p- and v-columns through the same combination.
    const double lam_rate = lam_theta + s1 * lam_sigma;

    out.segment<3>(0) = (n / (D * D)) * lam_rate * pt.ddr;
    out.segment<3>(3) = lam_p + (lam_rate / D) * pt.dr;
    const Eigen::Vector3d mu = lam_w.cwiseQuotient(prm.inertia);
    out.segment<3>(6) = prm.inertia.cwiseProduct(w.cross(mu)) -
                        prm.inertia.cwiseProduct(w).cross(mu) +
                        0.5 * quaternion_rate_jacobian_omega(q).transpose() * lam_q;
    out.segment<4>(9) = (u.sum() / prm.mass) * thrust_axis_jacobian(q).transpose() * lam_v -
                        0.5 * omega_matrix(w) * lam_q;
    out(13) = dthdot_dtheta * lam_theta +
              (s1_prime * n / D + s1 * dthdot_dtheta) * lam_sigma;
    out(14) = 0.0;
}

void block_jacu_tmul(const DroneParams& prm, const Eigen::Matrix<double, 3, 4>& mixer,
                     ConstVec x, ConstVec lam, MutVec out) {
    const Eigen::Vector4d q = x.segment<4>(9);
    const Eigen::Vector3d lam_v = lam.segment<3>(3);
    const Eigen::Vector3d mu = lam.segment<3>(6).cwiseQuotient(prm.inertia);
    out.head<4>() = Eigen::Vector4d::Constant(thrust_axis(q).dot(lam_v) / prm.mass) +
                    mixer.transpose() * mu;
}

Eigen::Matrix<double, 3, 4> make_mixer(const DroneParams& prm) { return mixer_matrix(prm); }

}  // namespace

// ---------------------------------------------------------------------------
// PathFollowOcp

PathFollowOcp::PathFollowOcp(DroneParams params, CostWeights weights,
                             const ParametricPath& path)
    : params_(std::move(params)), weights_(std::move(weights)), path_(path) {
    params_.validate();
    weights_.validate();
}

void PathFollowOcp::dynamics(ConstVec x, ConstVec u, MutVec dx) const {
    block_dynamics(path_, params_, make_mixer(params_), x, u, dx);
}

void PathFollowOcp::dynamics_jacx_tmul(ConstVec x, ConstVec u, ConstVec lam,
                                       MutVec out) const {
    block_jacx_tmul(path_, params_, x, u, lam, out);
}

void PathFollowOcp::dynamics_jacu_tmul(ConstVec x, ConstVec, ConstVec lam,
                                       MutVec out) const {
    block_jacu_tmul(params_, make_mixer(params_), x, lam, out);
}

double PathFollowOcp::stage_cost(ConstVec x, ConstVec u) const {
    return stage_cost_pf(AugmentedState::unpack(x.head<15>()),
                         ControlInput{u.head<4>()}, weights_, path_);
}

void PathFollowOcp::stage_cost_gradient_x(ConstVec x, ConstVec, MutVec g) const {
    g = stage_cost_pf_gradient_x(AugmentedState::unpack(x.head<15>()), weights_, path_);
}

void PathFollowOcp::stage_cost_gradient_u(ConstVec, ConstVec u, MutVec g) const {
    g = stage_cost_pf_gradient_u(ControlInput{u.head<4>()}, weights_);
}

double PathFollowOcp::terminal_cost(ConstVec x) const {
    return terminal_cost_pf(AugmentedState::unpack(x.head<15>()), weights_, path_);
}

void PathFollowOcp::terminal_cost_gradient_x(ConstVec x, MutVec g) const {
    // The input term carries no state dependence, so the stage gradient in
    // x doubles as the terminal gradient.
    g = stage_cost_pf_gradient_x(AugmentedState::unpack(x.head<15>()), weights_, path_);
}

Eigen::VectorXd PathFollowOcp::reference_input() const {
    return Eigen::Vector4d::Constant(params_.hover_thrust());
}

// ---------------------------------------------------------------------------
// RacingOcp

RacingOcp::RacingOcp(DroneParams params, CostWeights weights, PotentialParams potential,
                     double opponent_speed, const ParametricPath& path)
    : params_(std::move(params)),
      weights_(std::move(weights)),
      potential_(std::move(potential)),
      opponent_speed_(opponent_speed),
      path_(path) {
    params_.validate();
    weights_.validate();
    potential_.validate();
}

void RacingOcp::dynamics(ConstVec x, ConstVec u, MutVec dx) const {
    block_dynamics(path_, params_, make_mixer(params_), x.head<15>(), u, dx.head(15));
    dx.segment<3>(15) = opponent_speed_ * path_.eval(x(18)).dr;
    dx(18) = opponent_speed_;
}

void RacingOcp::dynamics_jacx_tmul(ConstVec x, ConstVec u, ConstVec lam,
                                   MutVec out) const {
    block_jacx_tmul(path_, params_, x.head<15>(), u, lam.head<15>(), out.head(15));
    out.segment<3>(15).setZero();
    out(18) = opponent_speed_ * path_.eval(x(18)).ddr.dot(lam.segment<3>(15));
}

void RacingOcp::dynamics_jacu_tmul(ConstVec x, ConstVec, ConstVec lam, MutVec out) const {
    block_jacu_tmul(params_, make_mixer(params_), x.head<15>(), lam.head<15>(), out);
}

double RacingOcp::stage_cost(ConstVec x, ConstVec u) const {
    return nmpc_stage_cost(RacingState::unpack(x.head<19>()), ControlInput{u.head<4>()},
                           weights_, potential_, path_);
}

void RacingOcp::stage_cost_gradient_x(ConstVec x, ConstVec, MutVec g) const {
    const RacingState s = RacingState::unpack(x.head<19>());
    g.head(15) = stage_cost_pf_gradient_x(s.ego, weights_, path_);
    const PotentialGradient pg =
        potential_with_gradient(s.ego.drone.position, s.ego.theta, s.opponent_position,
                                s.opponent_theta, potential_, path_);
    g.segment<3>(0) += pg.ego_position;
    g(13) += pg.ego_theta;
    g.segment<3>(15) = pg.op_position;
    g(18) = pg.op_theta;
}

void RacingOcp::stage_cost_gradient_u(ConstVec, ConstVec u, MutVec g) const {
    g = stage_cost_pf_gradient_u(ControlInput{u.head<4>()}, weights_);
}

double RacingOcp::terminal_cost(ConstVec x) const {
    return nmpc_terminal_cost(RacingState::unpack(x.head<19>()), weights_, potential_,
                              path_);
}

void RacingOcp::terminal_cost_gradient_x(ConstVec x, MutVec g) const {
    stage_cost_gradient_x(x, reference_input(), g);
}

Eigen::VectorXd RacingOcp::reference_input() const {
    return Eigen::Vector4d::Constant(params_.hover_thrust());
}

// ---------------------------------------------------------------------------
// GameOcp

GameOcp::GameOcp(DroneParams params, CostWeights ego_weights,
                 CostWeights opponent_weights, PotentialParams potential,
                 const ParametricPath& path)
    : params_(std::move(params)),
      ego_weights_(std::move(ego_weights)),
      opponent_weights_(std::move(opponent_weights)),
      potential_(std::move(potential)),
      path_(path) {
    params_.validate();
    ego_weights_.validate();
    opponent_weights_.validate();
    potential_.validate();
}

void GameOcp::dynamics(ConstVec x, ConstVec u, MutVec dx) const {
    const auto mixer = make_mixer(params_);
    block_dynamics(path_, params_, mixer, x.head<15>(), u.head<4>(), dx.head(15));
    block_dynamics(path_, params_, mixer, x.tail<15>(), u.tail<4>(), dx.tail(15));
}

void GameOcp::dynamics_jacx_tmul(ConstVec x, ConstVec u, ConstVec lam, MutVec out) const {
    block_jacx_tmul(path_, params_, x.head<15>(), u.head<4>(), lam.head<15>(),
                    out.head(15));
    block_jacx_tmul(path_, params_, x.tail<15>(), u.tail<4>(), lam.tail<15>(),
                    out.tail(15));
}

void GameOcp::dynamics_jacu_tmul(ConstVec x, ConstVec, ConstVec lam, MutVec out) const {
    const auto mixer = make_mixer(params_);
    block_jacu_tmul(params_, mixer, x.head<15>(), lam.head<15>(), out.head(4));
    block_jacu_tmul(params_, mixer, x.tail<15>(), lam.tail<15>(), out.tail(4));
}

double GameOcp::stage_cost(ConstVec x, ConstVec u) const {
    return nrhdg_stage_cost(GameState::unpack(x.head<30>()), ControlInput{u.head<4>()},
                            ControlInput{u.tail<4>()}, ego_weights_, opponent_weights_,
                            potential_, path_);
}

void GameOcp::stage_cost_gradient_x(ConstVec x, ConstVec, MutVec g) const {
    const GameState s = GameState::unpack(x.head<30>());
    g.head(15) = stage_cost_pf_gradient_x(s.ego, ego_weights_, path_);
    g.tail(15) = -stage_cost_pf_gradient_x(s.opponent, opponent_weights_, path_);

    // Ego's shaping term (minimized) and the opponent's mirrored term
    // (maximized, hence subtracted); each touches both drones' blocks.
    const PotentialGradient ego_pot = potential_with_gradient(
        s.ego.drone.position, s.ego.theta, s.opponent.drone.position, s.opponent.theta,
        potential_, path_);
    const PotentialGradient op_pot = potential_with_gradient(
        s.opponent.drone.position, s.opponent.theta, s.ego.drone.position, s.ego.theta,
        potential_, path_);

    g.segment<3>(0) += ego_pot.ego_position - op_pot.op_position;
    g(13) += ego_pot.ego_theta - op_pot.op_theta;
    g.segment<3>(15) += ego_pot.op_position - op_pot.ego_position;
    g(28) += ego_pot.op_theta - op_pot.ego_theta;
}

void GameOcp::stage_cost_gradient_u(ConstVec, ConstVec u, MutVec g) const {
    g.head(4) = stage_cost_pf_gradient_u(ControlInput{u.head<4>()}, ego_weights_);
    g.tail(4) = -stage_cost_pf_gradient_u(ControlInput{u.tail<4>()}, opponent_weights_);
}

double GameOcp::terminal_cost(ConstVec x) const {
    return nrhdg_terminal_cost(GameState::unpack(x.head<30>()), ego_weights_,
                               opponent_weights_, potential_, path_);
}

void GameOcp::terminal_cost_gradient_x(ConstVec x, MutVec g) const {
    stage_cost_gradient_x(x, reference_input(), g);
}

Eigen::VectorXd GameOcp::reference_input() const {
    Eigen::VectorXd u(8);
    u.setConstant(params_.hover_thrust());
    return u;
}

}  // namespace raceline
