#include "oracles.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace oracles {

Eigen::MatrixXd lqr_first_gain(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                               const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R,
                               const Eigen::MatrixXd& P_final, int stages) {
  Eigen::MatrixXd P = P_final;
  Eigen::MatrixXd K;
  for (int k = stages - 1; k >= 0; --k) {
    const Eigen::MatrixXd BtP = B.transpose() * P;
    K = (R + BtP * B).ldlt().solve(BtP * A);
    const Eigen::MatrixXd Acl = A - B * K;
    P = Q + K.transpose() * R * K + Acl.transpose() * P * Acl;
  }
  return K;
}

GameGains game_first_gains(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Bu,
                           const Eigen::MatrixXd& Bv, const Eigen::MatrixXd& Q,
                           const Eigen::MatrixXd& Ru, const Eigen::MatrixXd& Rv,
                           const Eigen::MatrixXd& P_final, int stages) {
  const auto n = A.rows();
  const auto mu = Bu.cols();
  const auto mv = Bv.cols();
  Eigen::MatrixXd P = P_final;
  GameGains gains;
  for (int k = stages - 1; k >= 0; --k) {
    // Maximizer concavity: the stage problem must be strictly concave in v,
    // otherwise the saddle point does not exist and the recursion is invalid.
    const Eigen::MatrixXd concavity = Rv - Bv.transpose() * P * Bv;
    Eigen::LLT<Eigen::MatrixXd> chol(concavity);
    if (chol.info() != Eigen::Success) {
      throw std::runtime_error("game recursion lost concavity in the maximizer");
    }

    // Stationarity of the stage saddle problem in (u, v):
    //   (Ru + Bu'P Bu) u + Bu'P Bv v = -Bu'P A x
    //   Bv'P Bu u + (-Rv + Bv'P Bv) v = -Bv'P A x
    Eigen::MatrixXd M(mu + mv, mu + mv);
    M.topLeftCorner(mu, mu) = Ru + Bu.transpose() * P * Bu;
    M.topRightCorner(mu, mv) = Bu.transpose() * P * Bv;
    M.bottomLeftCorner(mv, mu) = Bv.transpose() * P * Bu;
    M.bottomRightCorner(mv, mv) = Bv.transpose() * P * Bv - Rv;
    Eigen::MatrixXd rhs(mu + mv, n);
    rhs.topRows(mu) = Bu.transpose() * P * A;
    rhs.bottomRows(mv) = Bv.transpose() * P * A;
    const Eigen::MatrixXd K = M.fullPivLu().solve(rhs);
    gains.minimizer = K.topRows(mu);
    gains.maximizer = K.bottomRows(mv);

    const Eigen::MatrixXd Acl = A - Bu * gains.minimizer - Bv * gains.maximizer;
    P = Q + gains.minimizer.transpose() * Ru * gains.minimizer -
        gains.maximizer.transpose() * Rv * gains.maximizer +
        Acl.transpose() * P * Acl;
  }
  return gains;
}

GridProjectionOracle::GridProjectionOracle(const raceline::ParametricPath& path,
                                           std::size_t points) {
  theta_min_ = path.theta_min();
  spacing_ = (path.theta_max() - path.theta_min()) / static_cast<double>(points - 1);
  grid_.resize(points);
  for (std::size_t i = 0; i < points; ++i) {
    grid_[i] = path.position(theta_min_ + spacing_ * static_cast<double>(i));
  }
}

void GridProjectionOracle::seed(double theta) {
  auto idx = static_cast<std::ptrdiff_t>(std::lround((theta - theta_min_) / spacing_));
  current_ = std::clamp<std::ptrdiff_t>(idx, 0, static_cast<std::ptrdiff_t>(grid_.size()) - 1);
}

double GridProjectionOracle::track(const Eigen::Vector3d& position, std::ptrdiff_t window) {
  const auto lo = std::max<std::ptrdiff_t>(0, current_ - window);
  const auto hi = std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(grid_.size()) - 1,
                                           current_ + window);
  std::ptrdiff_t best = lo;
  double best_d2 = (grid_[static_cast<std::size_t>(lo)] - position).squaredNorm();
  for (std::ptrdiff_t i = lo + 1; i <= hi; ++i) {
    const double d2 = (grid_[static_cast<std::size_t>(i)] - position).squaredNorm();
    if (d2 < best_d2) {
      best_d2 = d2;
      best = i;
    }
  }
  current_ = best;
  return theta_min_ + spacing_ * static_cast<double>(best);
}

Eigen::VectorXd central_difference(const std::function<double(const Eigen::VectorXd&)>& f,
                                   const Eigen::VectorXd& x) {
  Eigen::VectorXd grad(x.size());
  Eigen::VectorXd probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = 1e-5 * std::max(1.0, std::abs(x[i]));
    probe[i] = x[i] + h;
    const double above = f(probe);
    probe[i] = x[i] - h;
    const double below = f(probe);
    probe[i] = x[i];
    grad[i] = (above - below) / (2.0 * h);
  }
  return grad;
}

SmoothTrajectory::SmoothTrajectory(const raceline::ParametricPath& path,
                                   std::mt19937& rng, double duration)
    : path_(&path) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  drift_ = 0.15 + 0.3 * unit(rng);
  wobble_freq_ = 0.3 + 1.2 * unit(rng);
  // |d(wobble)/dt| <= 0.8 * drift keeps g strictly increasing.
  wobble_amp_ = 0.8 * drift_ / wobble_freq_ * unit(rng);
  wobble_phase_ = 2.0 * M_PI * unit(rng);
  // Keep g(t) comfortably inside the parameter interval for the whole run.
  const double travel = drift_ * duration + 2.0 * wobble_amp_;
  const double lo = path.theta_min() + 0.5;
  const double hi = path.theta_max() - 0.5 - travel;
  theta0_ = lo + (hi - lo) * unit(rng);
  for (int i = 0; i < 3; ++i) {
    offset_amp_[i] = 0.35 * unit(rng);
    offset_freq_[i] = 0.4 + 1.6 * unit(rng);
    offset_phase_[i] = 2.0 * M_PI * unit(rng);
  }
}

Eigen::Vector3d SmoothTrajectory::position(double t) const {
  Eigen::Vector3d p = path_->position(nominal_theta(t));
  for (int i = 0; i < 3; ++i) {
    p[i] += offset_amp_[i] * std::sin(offset_freq_[i] * t + offset_phase_[i]);
  }
  return p;
}

Eigen::Vector3d SmoothTrajectory::velocity(double t) const {
  const double g = nominal_theta(t);
  const double gdot = drift_ + wobble_amp_ * wobble_freq_ * std::cos(wobble_freq_ * t + wobble_phase_);
  Eigen::Vector3d v = path_->eval(g).dr * gdot;
  for (int i = 0; i < 3; ++i) {
    v[i] += offset_amp_[i] * offset_freq_[i] * std::cos(offset_freq_[i] * t + offset_phase_[i]);
  }
  return v;
}

double SmoothTrajectory::nominal_theta(double t) const {
  return theta0_ + drift_ * t + wobble_amp_ * std::sin(wobble_freq_ * t + wobble_phase_);
}

}  // namespace oracles
