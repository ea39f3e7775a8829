// Random state generators shared by the gradient checks.  States are placed
// near the course (bounded lateral offset) so the projection denominator stays
// safely positive, but are otherwise unstructured: quaternions are random unit
// vectors, velocities and body rates span a generous flight envelope.
#pragma once

#include <random>

#include "raceline/costs.hpp"
#include "raceline/path.hpp"
#include "raceline/projection.hpp"

namespace sampling {

inline double uniform(std::mt19937& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline raceline::AugmentedState augmented(std::mt19937& rng,
                                          const raceline::ParametricPath& path) {
  raceline::AugmentedState s;
  s.theta = uniform(rng, path.theta_min() + 0.5, path.theta_max() - 0.5);
  const Eigen::Vector3d on_path = path.position(s.theta);
  for (int i = 0; i < 3; ++i) {
    s.drone.position[i] = on_path[i] + uniform(rng, -0.3, 0.3);
    s.drone.velocity[i] = uniform(rng, -2.0, 2.0);
    s.drone.body_rate[i] = uniform(rng, -3.0, 3.0);
  }
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::Vector4d q(gauss(rng), gauss(rng), gauss(rng), gauss(rng));
  s.drone.quaternion = q.normalized();
  s.sigma = uniform(rng, -5.0, 5.0);
  return s;
}

inline raceline::RacingState racing(std::mt19937& rng,
                                    const raceline::ParametricPath& path) {
  raceline::RacingState s;
  s.ego = augmented(rng, path);
  s.opponent_theta = uniform(rng, path.theta_min() + 0.5, path.theta_max() - 0.5);
  const Eigen::Vector3d on_path = path.position(s.opponent_theta);
  for (int i = 0; i < 3; ++i) {
    s.opponent_position[i] = on_path[i] + uniform(rng, -0.3, 0.3);
  }
  return s;
}

inline raceline::GameState game(std::mt19937& rng,
                                const raceline::ParametricPath& path) {
  raceline::GameState s;
  s.ego = augmented(rng, path);
  s.opponent = augmented(rng, path);
  return s;
}

inline Eigen::Vector4d thrust(std::mt19937& rng, const raceline::DroneParams& params) {
  Eigen::Vector4d u;
  for (int i = 0; i < 4; ++i) {
    u[i] = params.hover_thrust() * uniform(rng, 0.5, 1.5);
  }
  return u;
}

}  // namespace sampling
