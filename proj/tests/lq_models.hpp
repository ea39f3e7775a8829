// Small linear-quadratic optimal-control models with known closed-form
// receding-horizon solutions.  Shared between the unit tests and the
// acceptance suite so both check the solver against the same fixtures.
#pragma once

#include <Eigen/Dense>

#include "raceline/ocp.hpp"

namespace lq {

// Scalar double integrator with quadratic tracking cost; the smallest
// nontrivial problem with a known receding-horizon solution.
class DoubleIntegratorOcp final : public raceline::OcpModel {
 public:
  int state_dim() const override { return 2; }
  int input_dim() const override { return 1; }
  void dynamics(ConstVec x, ConstVec u, MutVec dx) const override {
    dx[0] = x[1];
    dx[1] = u[0];
  }
  void dynamics_jacx_tmul(ConstVec, ConstVec, ConstVec lam, MutVec out) const override {
    out[0] = 0.0;
    out[1] = lam[0];
  }
  void dynamics_jacu_tmul(ConstVec, ConstVec, ConstVec lam, MutVec out) const override {
    out[0] = lam[1];
  }
  double stage_cost(ConstVec x, ConstVec u) const override {
    return x[0] * x[0] + 0.1 * x[1] * x[1] + 0.5 * u[0] * u[0];
  }
  void stage_cost_gradient_x(ConstVec x, ConstVec, MutVec g) const override {
    g[0] = 2.0 * x[0];
    g[1] = 0.2 * x[1];
  }
  void stage_cost_gradient_u(ConstVec, ConstVec u, MutVec g) const override {
    g[0] = u[0];
  }
  double terminal_cost(ConstVec x) const override {
    return 2.0 * x[0] * x[0] + 0.2 * x[1] * x[1];
  }
  void terminal_cost_gradient_x(ConstVec x, MutVec g) const override {
    g[0] = 4.0 * x[0];
    g[1] = 0.4 * x[1];
  }
  Eigen::VectorXd reference_input() const override { return Eigen::VectorXd::Zero(1); }
};

// Scalar zero-sum game with stacked input (u, v): the minimizer steers,
// the maximizer disturbs at quadratic reward rv.  Concave in v as long as
// rv dominates the accumulated value curvature.
class ScalarGameOcp final : public raceline::OcpModel {
 public:
  ScalarGameOcp(double bv, double rv) : bv_(bv), rv_(rv) {}
  int state_dim() const override { return 1; }
  int input_dim() const override { return 2; }
  void dynamics(ConstVec, ConstVec u, MutVec dx) const override {
    dx[0] = u[0] + bv_ * u[1];
  }
  void dynamics_jacx_tmul(ConstVec, ConstVec, ConstVec, MutVec out) const override {
    out[0] = 0.0;
  }
  void dynamics_jacu_tmul(ConstVec, ConstVec, ConstVec lam, MutVec out) const override {
    out[0] = lam[0];
    out[1] = bv_ * lam[0];
  }
  double stage_cost(ConstVec x, ConstVec u) const override {
    return x[0] * x[0] + u[0] * u[0] - rv_ * u[1] * u[1];
  }
  void stage_cost_gradient_x(ConstVec x, ConstVec, MutVec g) const override {
    g[0] = 2.0 * x[0];
  }
  void stage_cost_gradient_u(ConstVec, ConstVec u, MutVec g) const override {
    g[0] = 2.0 * u[0];
    g[1] = -2.0 * rv_ * u[1];
  }
  double terminal_cost(ConstVec x) const override { return 2.0 * x[0] * x[0]; }
  void terminal_cost_gradient_x(ConstVec x, MutVec g) const override {
    g[0] = 4.0 * x[0];
  }
  Eigen::VectorXd reference_input() const override { return Eigen::VectorXd::Zero(2); }

 private:
  double bv_, rv_;
};

// One RK4 step of linear dynamics xdot = A x + B u with piecewise-constant u.
inline Eigen::VectorXd rk4_linear(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                  const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                                  double dt) {
  const auto f = [&](const Eigen::VectorXd& z) -> Eigen::VectorXd { return A * z + B * u; };
  const Eigen::VectorXd k1 = f(x);
  const Eigen::VectorXd k2 = f(x + 0.5 * dt * k1);
  const Eigen::VectorXd k3 = f(x + 0.5 * dt * k2);
  const Eigen::VectorXd k4 = f(x + dt * k3);
  return x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace lq
