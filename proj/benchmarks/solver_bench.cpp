// Microbenchmarks for the hot path of the racing stack: path evaluation,
// projection solves, one plant step, and one solver update per controller.
// The solver updates are the numbers that must fit inside the 1 ms control
// cycle; run with --benchmark_min_time to tighten the estimates.

#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "raceline/costs.hpp"
#include "raceline/dynamics.hpp"
#include "raceline/ocp.hpp"
#include "raceline/path.hpp"
#include "raceline/projection.hpp"
#include "raceline/race.hpp"
#include "raceline/solver.hpp"

using namespace raceline;

namespace {

// Mirrors the shipped benchmark configuration: default weights and horizon,
// Krylov dimension 10, timing instrumentation off (the benchmark harness
// provides the clock).
SolverParams bench_solver_params() {
    SolverParams sp;
    sp.krylov_dim = 10;
    sp.measure_timing = false;
    return sp;
}

AugmentedState rest_at(const ParametricPath& path, double theta) {
    AugmentedState s;
    s.theta = theta;
    s.sigma = 0.0;
    s.drone.position = path.position(theta);
    return s;
}

void path_evaluation(benchmark::State& state) {
    const SinusoidPath path = race_course();
    double theta = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(path.eval(theta));
        theta += 1e-3;
        if (theta > path.theta_max()) theta = path.theta_min();
    }
}
BENCHMARK(path_evaluation);

void projection_solve(benchmark::State& state) {
    const SinusoidPath path = race_course();
    const Eigen::Vector3d p = path.position(2.0) + Eigen::Vector3d(0.1, -0.05, 0.2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_initial_projection(path, p, 2.0));
    }
}
BENCHMARK(projection_solve);

void plant_step(benchmark::State& state) {
    const SinusoidPath path = race_course();
    const DroneParams params = DroneParams::mambofly();
    PairState x;
    x.rear = rest_at(path, 0.0);
    x.front = rest_at(path, 1.0);
    const ControlInput u = ControlInput::hover(params);
    for (auto _ : state) {
        x = step_plant(x, u, u, 1e-3, path, params);
    }
}
BENCHMARK(plant_step);

void one_sided_update(benchmark::State& state) {
    const SinusoidPath path = race_course();
    const DroneParams drone = DroneParams::mambofly();
    RacingOcp model(drone, CostWeights{}, PotentialParams{}, 1.0, path);

    RacingState x0;
    x0.ego = rest_at(path, 0.0);
    x0.opponent_theta = 1.0;
    x0.opponent_position = path.position(1.0);
    const Eigen::VectorXd x = x0.pack();

    ContinuationSolver solver(model, HorizonDiscretization{}, bench_solver_params());
    solver.initialize(x, 0.0);

    double t = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(solver.update(x, t, 1e-3));
        t += 1e-3;
    }
}
BENCHMARK(one_sided_update);

void game_update(benchmark::State& state) {
    const SinusoidPath path = race_course();
    const DroneParams drone = DroneParams::mambofly();
    GameOcp model(drone, CostWeights{}, front_weight_defaults(), PotentialParams{}, path);

    GameState x0;
    x0.ego = rest_at(path, 0.0);
    x0.opponent = rest_at(path, 1.0);
    const Eigen::VectorXd x = x0.pack();

    ContinuationSolver solver(model, HorizonDiscretization{}, bench_solver_params());
    solver.initialize(x, 0.0);

    double t = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(solver.update(x, t, 1e-3));
        t += 1e-3;
    }
}
BENCHMARK(game_update);

}  // namespace

BENCHMARK_MAIN();
