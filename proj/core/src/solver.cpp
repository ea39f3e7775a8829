#include "raceline/solver.hpp"

#include <chrono>
#include <cmath>

namespace raceline {

namespace {

void rollout(const OcpModel& model, const HorizonDiscretization& disc,
             const Eigen::VectorXd& x0, const Eigen::VectorXd& U, Eigen::VectorXd& dxbuf,
             Eigen::MatrixXd& X) {
    const int m = model.input_dim();
    const double dt = disc.step();
    X.col(0) = x0;
    for (int k = 0; k < disc.stages; ++k) {
        model.dynamics(X.col(k), U.segment(k * m, m), dxbuf);
        X.col(k + 1) = X.col(k) + dt * dxbuf;
    }
}

void residual_core(const OcpModel& model, const HorizonDiscretization& disc,
                   const Eigen::VectorXd& U, const Eigen::VectorXd& x0,
                   Eigen::MatrixXd& X, Eigen::MatrixXd& lam, Eigen::VectorXd& gx,
                   Eigen::VectorXd& jx, Eigen::VectorXd& gu, Eigen::VectorXd& ju,
                   Eigen::VectorXd& dxbuf, Eigen::VectorXd& F) {
    const int m = model.input_dim();
    const int N = disc.stages;
    const double dt = disc.step();

    rollout(model, disc, x0, U, dxbuf, X);

    // Backward costate sweep interleaved with the stationarity stack:
    // F_k = dtau * dH/du(x_k, u_k, lam_{k+1}).
    model.terminal_cost_gradient_x(X.col(N), lam.col(N));
    for (int k = N - 1; k >= 0; --k) {
        const auto u_k = U.segment(k * m, m);
        model.stage_cost_gradient_u(X.col(k), u_k, gu);
        model.dynamics_jacu_tmul(X.col(k), u_k, lam.col(k + 1), ju);
        F.segment(k * m, m) = dt * (gu + ju);

        model.stage_cost_gradient_x(X.col(k), u_k, gx);
        model.dynamics_jacx_tmul(X.col(k), u_k, lam.col(k + 1), jx);
        lam.col(k) = lam.col(k + 1) + dt * (gx + jx);
    }
}

/// Restarted GMRES on z (initial guess in, solution out) for A z = b with a
/// matrix-free operator. Returns the final residual norm; iterations
/// accumulates matrix applications beyond the initial residual.
template <typename MatVec>
double gmres_solve(MatVec&& apply, const Eigen::VectorXd& b, Eigen::VectorXd& z,
                   int subspace, int cycles, double tolerance, Eigen::VectorXd& resid,
                   Eigen::VectorXd& w, int& iterations) {
    const int dim = static_cast<int>(b.size());
    subspace = std::min(subspace, dim);

    apply(z, resid);
    resid = b - resid;
    double beta = resid.norm();

    Eigen::MatrixXd V(dim, subspace + 1);
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(subspace + 1, subspace);
    Eigen::VectorXd g(subspace + 1), cs(subspace), sn(subspace);

    for (int cycle = 0; cycle < cycles && beta > tolerance; ++cycle) {
        V.col(0) = resid / beta;
        g.setZero();
        g(0) = beta;

        int k = 0;
        for (int j = 0; j < subspace; ++j) {
            apply(V.col(j), w);
            ++iterations;
            for (int i = 0; i <= j; ++i) {
                H(i, j) = w.dot(V.col(i));
                w -= H(i, j) * V.col(i);
            }
            H(j + 1, j) = w.norm();
            const bool lucky = H(j + 1, j) < 1e-14 * std::max(1.0, beta);
            if (!lucky) V.col(j + 1) = w / H(j + 1, j);

            // Update the QR factorization of H by Givens rotations.
            for (int i = 0; i < j; ++i) {
                const double tmp = cs(i) * H(i, j) + sn(i) * H(i + 1, j);
                H(i + 1, j) = -sn(i) * H(i, j) + cs(i) * H(i + 1, j);
                H(i, j) = tmp;
            }
            const double denom = std::hypot(H(j, j), H(j + 1, j));
            cs(j) = denom > 0.0 ? H(j, j) / denom : 1.0;
            sn(j) = denom > 0.0 ? H(j + 1, j) / denom : 0.0;
            H(j, j) = denom;
            H(j + 1, j) = 0.0;
            g(j + 1) = -sn(j) * g(j);
            g(j) = cs(j) * g(j);

            k = j + 1;
            if (lucky || std::abs(g(k)) <= tolerance) break;
        }

        // Back-substitute R y = g and expand through the basis.
        Eigen::VectorXd y(k);
        for (int i = k - 1; i >= 0; --i) {
            double s = g(i);
            for (int j = i + 1; j < k; ++j) s -= H(i, j) * y(j);
            y(i) = H(i, i) != 0.0 ? s / H(i, i) : 0.0;
        }
        z += V.leftCols(k) * y;

        apply(z, resid);
        resid = b - resid;
        beta = resid.norm();
    }
    return beta;
}

}  // namespace

Eigen::MatrixXd predict_states(const OcpModel& model, const Eigen::VectorXd& x0,
                               const Eigen::VectorXd& U,
                               const HorizonDiscretization& disc) {
    disc.validate();
    Eigen::MatrixXd X(model.state_dim(), disc.stages + 1);
    Eigen::VectorXd dxbuf(model.state_dim());
    rollout(model, disc, x0, U, dxbuf, X);
    return X;
}

Eigen::VectorXd stationarity_residual_ocp(const OcpModel& model,
                                          const Eigen::VectorXd& x0,
                                          const Eigen::VectorXd& U, double /*t*/,
                                          const HorizonDiscretization& disc) {
    disc.validate();
    const int n = model.state_dim();
    Eigen::MatrixXd X(n, disc.stages + 1), lam(n, disc.stages + 1);
    Eigen::VectorXd gx(n), jx(n), dxbuf(n);
    Eigen::VectorXd gu(model.input_dim()), ju(model.input_dim());
    Eigen::VectorXd F(U.size());
    residual_core(model, disc, U, x0, X, lam, gx, jx, gu, ju, dxbuf, F);
    return F;
}

ContinuationSolver::ContinuationSolver(const OcpModel& model, HorizonDiscretization disc,
                                       SolverParams params)
    : model_(model), disc_(disc), params_(params) {
    disc_.validate();
    params_.validate();
    const int n = model.state_dim();
    const int dim = model.input_dim() * disc_.stages;
    U_.setZero(dim);
    Udot_.setZero(dim);
    states_.resize(n, disc_.stages + 1);
    costates_.resize(n, disc_.stages + 1);
    gx_.resize(n);
    jx_.resize(n);
    gu_.resize(model.input_dim());
    ju_.resize(model.input_dim());
    dxbuf_.resize(n);
    F0_.resize(dim);
    Fxh_.resize(dim);
    Fpert_.resize(dim);
    xpred_.resize(n);
    Upert_.resize(dim);
    b_.resize(dim);
    resid_.resize(dim);
    w_.resize(dim);
}

void ContinuationSolver::eval_residual(const Eigen::VectorXd& U,
                                       const Eigen::VectorXd& x, double /*t*/,
                                       Eigen::VectorXd& F) {
    residual_core(model_, disc_, U, x, states_, costates_, gx_, jx_, gu_, ju_, dxbuf_, F);
}

void ContinuationSolver::initialize(const Eigen::VectorXd& x0, double t0) {
    const int m = model_.input_dim();
    if (!initialized_) {
        const Eigen::VectorXd u_ref = model_.reference_input();
        for (int k = 0; k < disc_.stages; ++k) U_.segment(k * m, m) = u_ref;
        Udot_.setZero();
    }

    eval_residual(U_, x0, t0, F0_);
    double norm = F0_.norm();
    double best = norm;
    const int dim = static_cast<int>(U_.size());

    for (int iter = 0; iter < params_.newton_max_iterations && norm >= params_.newton_tolerance;
         ++iter) {
        // Newton direction from a generously sized GMRES solve (off the
        // real-time path, so the subspace can afford to be large).
        const auto apply = [&](const Eigen::Ref<const Eigen::VectorXd>& v,
                               Eigen::VectorXd& out) {
            Upert_ = U_ + params_.fd_step * v;
            eval_residual(Upert_, x0, t0, Fpert_);
            out = (Fpert_ - F0_) / params_.fd_step;
        };
        Eigen::VectorXd step = Eigen::VectorXd::Zero(dim);
        int dummy = 0;
        gmres_solve(apply, (-F0_).eval(), step, std::min(dim, 50), 2, 1e-10 * std::max(1.0, norm),
                    resid_, w_, dummy);

        // Halve the step until the residual actually shrinks.
        double alpha = 1.0;
        bool improved = false;
        for (int cut = 0; cut < 12; ++cut, alpha *= 0.5) {
            Upert_ = U_ + alpha * step;
            eval_residual(Upert_, x0, t0, Fpert_);
            const double trial = Fpert_.norm();
            if (std::isfinite(trial) && trial < norm) {
                U_ = Upert_;
                F0_ = Fpert_;
                norm = trial;
                improved = true;
                break;
            }
        }
        if (!improved) break;
        best = std::min(best, norm);
    }

    if (!(best < params_.newton_acceptable)) {
        throw InitializationFailed("solver initialization stalled with residual norm " +
                                   std::to_string(best));
    }
    initialized_ = true;
}

ControllerOutput ContinuationSolver::update(const Eigen::VectorXd& x, double t,
                                            double dt_control) {
    using clock = std::chrono::steady_clock;
    const auto start = params_.measure_timing ? clock::now() : clock::time_point{};

    const int m = model_.input_dim();
    const double h = params_.fd_step;

    // Continuation right-hand side: -zeta F - (F(U, x + h xdot, t + h) - F)/h,
    // with xdot taken from the model under the currently applied input.
    eval_residual(U_, x, t, F0_);
    if (!F0_.allFinite()) {
        throw NonFiniteResidual("stationarity residual became non-finite");
    }
    const double entry_norm = F0_.norm();

    model_.dynamics(x, U_.head(m), dxbuf_);
    xpred_ = x + h * dxbuf_;
    eval_residual(U_, xpred_, t + h, Fxh_);
    b_ = -params_.continuation_gain * F0_ - (Fxh_ - F0_) / h;

    const auto apply = [&](const Eigen::Ref<const Eigen::VectorXd>& v,
                           Eigen::VectorXd& out) {
        Upert_ = U_ + h * v;
        eval_residual(Upert_, xpred_, t + h, Fpert_);
        out = (Fpert_ - Fxh_) / h;
    };

    int iterations = 0;
    const double target = 1e-6 * std::max(1.0, b_.norm());
    const double achieved =
        gmres_solve(apply, b_, Udot_, params_.krylov_dim, 1 + params_.krylov_restarts,
                    target, resid_, w_, iterations);

    U_ += dt_control * Udot_;
    if (!U_.allFinite()) {
        throw NonFiniteResidual("stage-input trajectory became non-finite");
    }

    ControllerOutput out;
    out.input = U_.head(m);
    out.trajectory = U_;
    out.residual_norm = entry_norm;
    out.krylov_iterations = iterations;
    out.krylov_converged = achieved <= target;
    if (params_.measure_timing) {
        out.solve_seconds = std::chrono::duration<double>(clock::now() - start).count();
    }
    return out;
}

}  // namespace raceline
