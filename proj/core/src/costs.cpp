#include "raceline/costs.hpp"

#include <cmath>

namespace raceline {

double stage_cost_pf(const AugmentedState& x, const ControlInput& u,
                     const CostWeights& w, const ParametricPath& path) {
    const Eigen::Vector4d du = u.thrust.array() - w.input_reference;
    return terminal_cost_pf(x, w, path) + w.input * du.squaredNorm();
}

double terminal_cost_pf(const AugmentedState& x, const CostWeights& w,
                        const ParametricPath& path) {
    const Eigen::Vector3d dev = x.drone.position - path.position(x.theta);
    return dev.cwiseProduct(dev).dot(w.position) +
           x.drone.body_rate.cwiseProduct(x.drone.body_rate).dot(w.body_rate) -
           w.progress * x.sigma;
}

Vec15 stage_cost_pf_gradient_x(const AugmentedState& x, const CostWeights& w,
                               const ParametricPath& path) {
    const PathPoint pt = path.eval(x.theta);
    const Eigen::Vector3d weighted_dev =
        w.position.cwiseProduct(x.drone.position - pt.r);
    Vec15 g = Vec15::Zero();
    g.segment<3>(0) = 2.0 * weighted_dev;
    g.segment<3>(6) = 2.0 * w.body_rate.cwiseProduct(x.drone.body_rate);
    g(13) = -2.0 * weighted_dev.dot(pt.dr);
    g(14) = -w.progress;
    return g;
}

Eigen::Vector4d stage_cost_pf_gradient_u(const ControlInput& u, const CostWeights& w) {
    return 2.0 * w.input * (u.thrust.array() - w.input_reference).matrix();
}

Eigen::Vector4d opponent_prediction_derivative(const OpponentPrediction& pred,
                                               const ParametricPath& path) {
    Eigen::Vector4d d;
    d << pred.speed * path.eval(pred.theta).dr, pred.speed;
    return d;
}

double potential(const AugmentedState& ego, const Eigen::Vector3d& p_op,
                 double theta_op, const PotentialParams& pp,
                 const ParametricPath& path) {
    const double theta_gap = theta_op - ego.theta;
    const Eigen::Vector3d deviation_diff = (p_op - path.position(theta_op)) -
                                           (ego.drone.position - path.position(ego.theta));
    const double z = (theta_gap - pp.gaussian_center) / pp.gaussian_width;
    return std::exp(-z * z) * std::tanh(theta_gap - pp.tanh_crossover) *
           pp.amplitude / (1.0 + pp.lateral_decay * deviation_diff.squaredNorm());
}

PotentialGradient potential_with_gradient(const Eigen::Vector3d& p_ego,
                                          double theta_ego,
                                          const Eigen::Vector3d& p_op,
                                          double theta_op,
                                          const PotentialParams& pp,
                                          const ParametricPath& path) {
    const PathPoint ego_pt = path.eval(theta_ego);
    const PathPoint op_pt = path.eval(theta_op);
    const double theta_gap = theta_op - theta_ego;
    const Eigen::Vector3d rho = (p_op - op_pt.r) - (p_ego - ego_pt.r);

    const double z = (theta_gap - pp.gaussian_center) / pp.gaussian_width;
    const double gauss = std::exp(-z * z);
    const double th = std::tanh(theta_gap - pp.tanh_crossover);
    const double decay = 1.0 / (1.0 + pp.lateral_decay * rho.squaredNorm());

    PotentialGradient g;
    g.value = pp.amplitude * gauss * th * decay;

    // Partial w.r.t. the parameter gap: product rule over the Gaussian and
    // the tanh factors.
    const double d_gap =
        pp.amplitude * decay * gauss *
        (-2.0 * z / pp.gaussian_width * th + (1.0 - th * th));
    // Partial w.r.t. the squared deviation difference.
    const double d_r2 = -g.value * pp.lateral_decay * decay;

    g.ego_position = -2.0 * d_r2 * rho;
    g.ego_theta = -d_gap + 2.0 * d_r2 * rho.dot(ego_pt.dr);
    g.op_position = 2.0 * d_r2 * rho;
    g.op_theta = d_gap - 2.0 * d_r2 * rho.dot(op_pt.dr);
    return g;
}

double nmpc_stage_cost(const RacingState& x, const ControlInput& u,
                       const CostWeights& w, const PotentialParams& pp,
                       const ParametricPath& path) {
    return stage_cost_pf(x.ego, u, w, path) +
           potential(x.ego, x.opponent_position, x.opponent_theta, pp, path);
}

double nmpc_terminal_cost(const RacingState& x, const CostWeights& w,
                          const PotentialParams& pp, const ParametricPath& path) {
    return terminal_cost_pf(x.ego, w, path) +
           potential(x.ego, x.opponent_position, x.opponent_theta, pp, path);
}

double nrhdg_stage_cost(const GameState& x, const ControlInput& u_ego,
                        const ControlInput& u_op, const CostWeights& w_ego,
                        const CostWeights& w_op, const PotentialParams& pp,
                        const ParametricPath& path) {
    return stage_cost_pf(x.ego, u_ego, w_ego, path) +
           potential(x.ego, x.opponent.drone.position, x.opponent.theta, pp, path) -
           stage_cost_pf(x.opponent, u_op, w_op, path) -
           potential(x.opponent, x.ego.drone.position, x.ego.theta, pp, path);
}

double nrhdg_terminal_cost(const GameState& x, const CostWeights& w_ego,
                           const CostWeights& w_op, const PotentialParams& pp,
                           const ParametricPath& path) {
    return terminal_cost_pf(x.ego, w_ego, path) +
           potential(x.ego, x.opponent.drone.position, x.opponent.theta, pp, path) -
           terminal_cost_pf(x.opponent, w_op, path) -
           potential(x.opponent, x.ego.drone.position, x.ego.theta, pp, path);
}

}  // namespace raceline
