#include <doctest.h>

#include <cmath>

#include "raceline/race.hpp"

using namespace raceline;

namespace {

// Small, fast race setup used by the harness tests: a short duration keeps
// each closed-loop test well under a minute while exercising the full loop.
RaceConfig quick_config() {
  RaceConfig cfg;
  cfg.duration = 0.2;
  cfg.control_cycle = 2e-3;
  // Continuation is stable for gain * cycle ~ 1; follow the coarser cycle.
  cfg.solver.continuation_gain = 1.0 / cfg.control_cycle;
  cfg.solver.measure_timing = false;
  cfg.front_weights.input = 40.0;
  return cfg;
}

}  // namespace

TEST_CASE("controller names round trip") {
  CHECK(to_string(ControllerKind::Nmpc) == "M");
  CHECK(to_string(ControllerKind::Game) == "D");
  CHECK(controller_kind_from_string("M") == ControllerKind::Nmpc);
  CHECK(controller_kind_from_string("nmpc") == ControllerKind::Nmpc);
  CHECK(controller_kind_from_string("D") == ControllerKind::Game);
  CHECK(controller_kind_from_string("nrhdg") == ControllerKind::Game);
  CHECK(controller_kind_from_string("hover") == ControllerKind::Hover);
  CHECK_THROWS_AS(controller_kind_from_string("bogus"), ConfigError);
}

TEST_CASE("hovering drones stay put under the plant step") {
  const SinusoidPath path = race_course();
  const DroneParams params = DroneParams::mambofly();
  PairState s;
  s.rear.theta = 0.0;
  s.rear.drone.position = path.position(0.0);
  s.front.theta = 1.0;
  s.front.drone.position = path.position(1.0);

  const ControlInput hover = ControlInput::hover(params);
  PairState next = s;
  for (int i = 0; i < 100; ++i) {
    next = step_plant(next, hover, hover, 1e-3, path, params);
  }
  CHECK((next.rear.drone.position - s.rear.drone.position).norm() < 1e-9);
  CHECK((next.front.drone.position - s.front.drone.position).norm() < 1e-9);
  CHECK(std::abs(next.front.theta - 1.0) < 1e-9);
  CHECK(std::abs(next.rear.drone.quaternion.norm() - 1.0) < 1e-12);
}

TEST_CASE("free fall moves the projection parameter backward along descent") {
  // With zero thrust the rear drone accelerates straight down from the
  // origin; the course initially descends (dz/dtheta = 3 > 0 at theta = 0),
  // so the projection parameter must decrease.
  const SinusoidPath path = race_course();
  const DroneParams params = DroneParams::mambofly();
  PairState s;
  s.rear.theta = 0.0;
  s.rear.drone.position = path.position(0.0);
  s.front.theta = 1.0;
  s.front.drone.position = path.position(1.0);

  const ControlInput none{Eigen::Vector4d::Zero()};
  const ControlInput hover = ControlInput::hover(params);
  PairState next = s;
  for (int i = 0; i < 50; ++i) {
    next = step_plant(next, none, hover, 1e-3, path, params);
  }
  const double t = 0.05;
  CHECK(next.rear.drone.position.z() ==
        doctest::Approx(-0.5 * params.gravity * t * t).epsilon(1e-6));
  CHECK(next.rear.theta < 0.0);
  CHECK(next.rear.sigma < 0.0);
}

TEST_CASE("full closed-loop race harness") {
  const SinusoidPath path = race_course();

  SUBCASE("record count and time grid") {
    RaceConfig cfg = quick_config();
    const RaceLog log = run_race(cfg, path);
    REQUIRE(log.records.size() == 101);  // duration/cycle + 1 inclusive sample
    CHECK(log.records.front().t == 0.0);
    CHECK(log.records.back().t == doctest::Approx(0.2));
    CHECK(log.records[50].t == doctest::Approx(0.1));
  }

  SUBCASE("drones start at rest on the path at their configured parameters") {
    RaceConfig cfg = quick_config();
    const RaceLog log = run_race(cfg, path);
    const RaceRecord& first = log.records.front();
    CHECK(first.rear.theta == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(first.front.theta == doctest::Approx(1.0).epsilon(1e-9));
    CHECK((first.rear.drone.position - path.position(0.0)).norm() < 1e-9);
    CHECK((first.front.drone.position - path.position(1.0)).norm() < 1e-9);
    CHECK(first.distance == doctest::Approx((path.position(1.0) - path.position(0.0)).norm()));
  }

  SUBCASE("controlled drones make forward progress") {
    RaceConfig cfg = quick_config();
    cfg.duration = 0.5;
    const RaceLog log = run_race(cfg, path);
    CHECK(log.records.back().rear.theta > 0.0);
    CHECK(log.records.back().front.theta > 1.0);
  }

  SUBCASE("identical configurations reproduce the log bit for bit") {
    RaceConfig cfg = quick_config();
    const RaceLog a = run_race(cfg, path);
    const RaceLog b = run_race(cfg, path);
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
      CHECK(a.records[i].t == b.records[i].t);
      CHECK((a.records[i].rear.pack() - b.records[i].rear.pack()).norm() == 0.0);
      CHECK((a.records[i].front.pack() - b.records[i].front.pack()).norm() == 0.0);
      CHECK((a.records[i].rear_input - b.records[i].rear_input).norm() == 0.0);
      CHECK(a.records[i].rear_residual == b.records[i].rear_residual);
      CHECK(a.records[i].rear_solve_ms == 0.0);
    }
  }

  SUBCASE("hover opponents are allowed on both sides") {
    RaceConfig cfg = quick_config();
    cfg.front_controller = ControllerKind::Hover;
    cfg.rear_controller = ControllerKind::Nmpc;
    const RaceLog log = run_race(cfg, path);
    // The hovering front drone never advances.
    CHECK(log.records.back().front.theta == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(log.records.back().rear.theta > 0.0);
  }
}

TEST_CASE("race configuration validation") {
  RaceConfig cfg = quick_config();
  cfg.front_initial_theta = 0.0;  // not ahead of the rear drone
  CHECK_THROWS_AS(cfg.validate(), ConfigError);

  cfg = quick_config();
  cfg.duration = -1.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("progress extraction finds the first parameter crossing") {
  RaceLog log;
  for (int i = 0; i <= 10; ++i) {
    RaceRecord rec;
    rec.t = 0.1 * i;
    rec.rear.theta = 0.2 * i;         // rear gains 0.2 per sample
    rec.front.theta = 1.0 + 0.05 * i; // front gains 0.05
    log.records.push_back(rec);
  }
  // Crossing: 0.2 i >= 1 + 0.05 i  =>  i >= 6.67  =>  first at i = 7.
  const ProgressSeries series = extract_progress(log);
  REQUIRE(series.overtake_time.has_value());
  CHECK(*series.overtake_time == doctest::Approx(0.7));
  REQUIRE(series.time.size() == 11);
  CHECK(series.rear_theta[3] == doctest::Approx(0.6));
  CHECK(series.front_theta[3] == doctest::Approx(1.15));

  SUBCASE("ties count as an overtake") {
    RaceLog tie;
    RaceRecord a;
    a.t = 0.0;
    a.rear.theta = 0.0;
    a.front.theta = 1.0;
    RaceRecord b;
    b.t = 1.0;
    b.rear.theta = 1.5;
    b.front.theta = 1.5;
    tie.records = {a, b};
    CHECK(*extract_progress(tie).overtake_time == doctest::Approx(1.0));
  }

  SUBCASE("no crossing yields an empty overtake time") {
    RaceLog never;
    RaceRecord a;
    a.t = 0.0;
    a.rear.theta = 0.0;
    a.front.theta = 1.0;
    never.records = {a};
    CHECK(!extract_progress(never).overtake_time.has_value());
  }
}
