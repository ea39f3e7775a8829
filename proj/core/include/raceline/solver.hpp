#pragma once

#include <Eigen/Core>

#include "raceline/ocp.hpp"

namespace raceline {

/// Receding-horizon grid: N explicit-Euler stages over a fixed window T.
struct HorizonDiscretization {
    double horizon = 0.4;  ///< T [s]
    int stages = 20;       ///< N

    double step() const { return horizon / stages; }
    void validate() const {
        if (stages < 2 || !(horizon > 0.0)) {
            throw ConfigError("horizon needs T > 0 and at least two stages");
        }
    }
};

/// Continuation/Krylov solver knobs. The continuation gain defaults to the
/// reciprocal of the 1 ms control cycle.
struct SolverParams {
    double continuation_gain = 1000.0;  ///< zeta [1/s]
    double fd_step = 1e-6;              ///< directional-derivative step h
    int krylov_dim = 5;                 ///< GMRES subspace size per cycle
    int krylov_restarts = 1;            ///< extra restart cycles
    double newton_tolerance = 1e-6;     ///< initialization target on ||F||
    double newton_acceptable = 1e-2;    ///< initialization failure threshold
    int newton_max_iterations = 50;
    bool measure_timing = true;  ///< false pins solve time to exactly 0

    void validate() const {
        if (!(continuation_gain > 0.0) || !(fd_step > 0.0) || krylov_dim < 1 ||
            krylov_restarts < 0 || newton_max_iterations < 1) {
            throw ConfigError("solver parameters out of range");
        }
    }
};

/// Result of one controller update.
struct ControllerOutput {
    Eigen::VectorXd input;       ///< first-stage input(s) to apply now
    Eigen::VectorXd trajectory;  ///< full stacked stage-input vector U
    double residual_norm = 0.0;  ///< ||F|| at the pre-update solution
    double solve_seconds = 0.0;  ///< wall-clock time (0 when timing is off)
    int krylov_iterations = 0;
    bool krylov_converged = true;  ///< false: tolerance not met, last iterate kept
};

/// Forward Euler rollout of the stage states under stacked inputs U;
/// returns an n x (N+1) matrix whose columns are x_0 ... x_N.
Eigen::MatrixXd predict_states(const OcpModel& model, const Eigen::VectorXd& x0,
                               const Eigen::VectorXd& U,
                               const HorizonDiscretization& disc);

/// Stacked first-order stationarity residual of the discretized horizon
/// problem: costates by backward recursion, then per-stage dtau * dH/du.
/// A root of F in U is an (open-loop) stationary solution from x0.
Eigen::VectorXd stationarity_residual_ocp(const OcpModel& model,
                                          const Eigen::VectorXd& x0,
                                          const Eigen::VectorXd& U, double t,
                                          const HorizonDiscretization& disc);

/// Real-time continuation solver: tracks a root of F(U, x, t) = 0 as the
/// state flows, by solving (dF/dU) Udot = -zeta F - (dF/dx) xdot - dF/dt
/// matrix-free with restarted GMRES and advancing U one control step along
/// Udot. One instance per controlled drone; owns all workspace.
class ContinuationSolver {
public:
    ContinuationSolver(const OcpModel& model, HorizonDiscretization disc,
                       SolverParams params = {});

    /// Seed U with the reference input on first use (subsequent calls keep
    /// the current U as warm start) and refine by damped Newton until
    /// ||F|| < newton_tolerance. Throws InitializationFailed when ||F||
    /// cannot be brought below newton_acceptable.
    void initialize(const Eigen::VectorXd& x0, double t0);

    /// One continuation step at measured state x and time t; dt_control is
    /// the interval to the next update. Throws NonFiniteResidual if the
    /// residual stops being finite.
    ControllerOutput update(const Eigen::VectorXd& x, double t, double dt_control);

    const Eigen::VectorXd& solution() const { return U_; }
    bool initialized() const { return initialized_; }
    const HorizonDiscretization& discretization() const { return disc_; }
    const SolverParams& params() const { return params_; }

private:
    void eval_residual(const Eigen::VectorXd& U, const Eigen::VectorXd& x, double t,
                       Eigen::VectorXd& F);

    const OcpModel& model_;
    HorizonDiscretization disc_;
    SolverParams params_;

    Eigen::VectorXd U_;     ///< stacked stage inputs, dimension m*N
    Eigen::VectorXd Udot_;  ///< continuation rate, warm-starts each GMRES
    bool initialized_ = false;

    // Preallocated workspace (hot path must not allocate).
    Eigen::MatrixXd states_;    // n x (N+1)
    Eigen::MatrixXd costates_;  // n x (N+1)
    Eigen::VectorXd gx_, jx_, gu_, ju_, dxbuf_;
    Eigen::VectorXd F0_, Fxh_, Fpert_, xpred_, Upert_, b_, resid_, w_;
};

}  // namespace raceline
