#include <doctest.h>

#include <cmath>

#include "raceline/projection.hpp"

using namespace raceline;

namespace {

// Straight line along x: projection of any point is its x coordinate.
AnalyticPath make_line() {
  return AnalyticPath([](double t) { return Eigen::Vector3d(t, 0, 0); },
                      [](double) { return Eigen::Vector3d(1, 0, 0); },
                      [](double) { return Eigen::Vector3d::Zero().eval(); },
                      [](double) { return Eigen::Vector3d::Zero().eval(); },
                      -100.0, 100.0);
}

// Circle of radius R in the xy plane.
AnalyticPath make_circle(double R) {
  return AnalyticPath(
      [R](double t) { return Eigen::Vector3d(R * std::cos(t), R * std::sin(t), 0); },
      [R](double t) { return Eigen::Vector3d(-R * std::sin(t), R * std::cos(t), 0); },
      [R](double t) { return Eigen::Vector3d(-R * std::cos(t), -R * std::sin(t), 0); },
      [R](double t) { return Eigen::Vector3d(R * std::sin(t), -R * std::cos(t), 0); },
      -4.0 * M_PI, 4.0 * M_PI);
}

}  // namespace

TEST_CASE("projection onto a straight line") {
  const AnalyticPath line = make_line();
  const Eigen::Vector3d p(3.2, 5.0, -2.0);

  CHECK(stationarity_residual(line, 3.2, p) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(stationarity_residual(line, 4.0, p) == doctest::Approx(0.8));
  CHECK(stationarity_derivative(line, 3.2, p) == doctest::Approx(1.0));
  CHECK(singularity_margin(line, 3.2, p) == doctest::Approx(1.0));
  CHECK(solve_initial_projection(line, p) == doctest::Approx(3.2));

  // The projection simply follows the x velocity; lateral motion is invisible.
  CHECK(projection_rate(line, 3.2, p, {2.0, -7.0, 4.0}) == doctest::Approx(2.0));
  CHECK(arc_length_rate(line, 3.2, 2.0) == doctest::Approx(2.0));
  CHECK(signed_arc_length(line, -1.5, 4.0) == doctest::Approx(5.5));
}

TEST_CASE("projection onto a circle") {
  const double R = 2.0;
  const AnalyticPath circle = make_circle(R);

  SUBCASE("outside point projects radially") {
    const Eigen::Vector3d p(3.0, 0.0, 0.0);
    CHECK(stationarity_residual(circle, 0.0, p) == doctest::Approx(0.0).epsilon(1e-12));
    // D = R * r for a point at radius r.
    CHECK(stationarity_derivative(circle, 0.0, p) == doctest::Approx(R * 3.0));
    CHECK(solve_initial_projection(circle, p, 0.3) == doctest::Approx(0.0).epsilon(1e-9));
  }

  SUBCASE("margin positive only within a radius of the circle") {
    CHECK(singularity_margin(circle, 0.0, {3.0, 0.0, 0.0}) > 0.0);        // radius 3
    CHECK(singularity_margin(circle, 0.0, {-0.5, 0.0, 0.0}) < 0.0);       // radius -0.5
    CHECK(singularity_margin(circle, 0.0, {R, 0.0, 0.0}) == doctest::Approx(R * R));
  }

  SUBCASE("projection rate diverges near the center and throws at it") {
    const Eigen::Vector3d near_center(1e-9, 0.0, 0.0);
    CHECK_THROWS_AS(projection_rate(circle, 0.0, near_center, {0.0, 1.0, 0.0}),
                    SingularProjection);
  }

  SUBCASE("tangential velocity advances theta at 1/r") {
    // At radius r, a tangential velocity v rotates the projection at v/r.
    const Eigen::Vector3d p(3.0, 0.0, 0.0);
    const Eigen::Vector3d v(0.0, 1.5, 0.0);
    CHECK(projection_rate(circle, 0.0, p, v) == doctest::Approx(1.5 / 3.0));
    CHECK(arc_length_rate(circle, 0.0, 0.5) == doctest::Approx(R * 0.5));
  }

  SUBCASE("arc length is R times the parameter sweep") {
    CHECK(signed_arc_length(circle, 0.0, 2.0) == doctest::Approx(2.0 * R).epsilon(1e-9));
    CHECK(signed_arc_length(circle, 1.0, -1.0) == doctest::Approx(-4.0).epsilon(1e-9));
  }
}

TEST_CASE("initial projection on the benchmark course") {
  const SinusoidPath course = race_course();

  SUBCASE("recovers a perturbed on-path parameter") {
    for (double theta : {0.7, 3.0, 9.5, 14.2, 20.0}) {
      const PathPoint pt = course.eval(theta);
      // Offset along the normal-ish direction, well inside the margin.
      Eigen::Vector3d n = pt.ddr;
      if (n.norm() < 1e-6) n = Eigen::Vector3d::UnitZ();
      const Eigen::Vector3d p = pt.r + 0.2 * n.normalized();
      const double found = solve_initial_projection(course, p, theta);
      CHECK(std::abs(found - theta) < 0.05);
      CHECK(std::abs(stationarity_residual(course, found, p)) < 1e-9);
    }
  }

  SUBCASE("hint disambiguates the self-intersection at the origin") {
    // The origin lies on the course at every multiple of 2 pi; the hint picks
    // the intended branch among the equally distant candidates.
    const Eigen::Vector3d p(0.05, 0.0, 0.02);
    const double near_zero = solve_initial_projection(course, p, 0.1);
    CHECK(std::abs(near_zero) < 0.5);
    const double near_two_pi = solve_initial_projection(course, p, 2.0 * M_PI - 0.1);
    CHECK(std::abs(near_two_pi - 2.0 * M_PI) < 0.5);
  }

  SUBCASE("far-away point still finds the global closest branch") {
    const Eigen::Vector3d p(100.0, 100.0, 100.0);
    const double theta = solve_initial_projection(course, p);
    CHECK(course.contains(theta));
    CHECK(std::abs(stationarity_residual(course, theta, p)) < 1e-6);
  }
}

TEST_CASE("augmented derivative stacks rigid body and projection rates") {
  const SinusoidPath course = race_course();
  const DroneParams params = DroneParams::mambofly();
  AugmentedState s;
  s.theta = 1.2;
  s.drone.position = course.position(1.2) + Eigen::Vector3d(0.0, 0.1, 0.0);
  s.drone.velocity = {1.0, -0.5, 0.8};

  const Vec15 dx = augmented_derivative(s, ControlInput::hover(params), course, params);
  const Vec13 body = drone_derivative(s.drone, ControlInput::hover(params), params);
  CHECK((dx.head<13>() - body).norm() < 1e-15);

  const double theta_dot = projection_rate(course, s.theta, s.drone.position, s.drone.velocity);
  CHECK(dx[13] == doctest::Approx(theta_dot).epsilon(1e-14));
  CHECK(dx[14] == doctest::Approx(arc_length_rate(course, s.theta, theta_dot)).epsilon(1e-14));
}

TEST_CASE("boundary minima are admissible, ill-posed interiors are not") {
  SUBCASE("closest approach beyond the interval clamps to the endpoint") {
    AnalyticPath stub([](double t) { return Eigen::Vector3d(t, 0, 0); },
                      [](double) { return Eigen::Vector3d(1, 0, 0); },
                      [](double) { return Eigen::Vector3d::Zero().eval(); },
                      [](double) { return Eigen::Vector3d::Zero().eval(); },
                      0.0, 1.0);
    CHECK(solve_initial_projection(stub, {5.0, 0.0, 0.0}) == doctest::Approx(1.0));
  }

  SUBCASE("the circle center has no well-posed projection at all") {
    // Every direction is equally close and the second-order condition fails
    // everywhere: the one point where the projection genuinely does not exist.
    const AnalyticPath circle = make_circle(2.0);
    CHECK_THROWS_AS(solve_initial_projection(circle, {0.0, 0.0, 0.0}), NoProjectionFound);
  }
}
