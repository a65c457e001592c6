#ifndef MVSKEW_INNER_SOLVER_HPP
#define MVSKEW_INNER_SOLVER_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "mvskew/errors.hpp"
#include "mvskew/surrogate.hpp"

namespace mvskew {

/// How the proximal-gradient step size is chosen.
enum class StepRule {
    fixed_lipschitz, // 1/L with L = max eigenvalue of the model (known from the build)
    backtracking     // doubling L until the quadratic majorization holds
};

struct InnerSettings {
    int max_iters = 2000;
    double tol = 1e-10; // on ||w_{k+1} - w_k||_inf
    StepRule step_rule = StepRule::fixed_lipschitz;
};

/// Minimizer of the subproblem model(w) + lambda4 ||w||_1.
struct InnerSolution {
    Eigen::VectorXd w_star;
    double y_star = 0.0; // lambda4 * ||w_star||_1
    int iters_used = 0;
    double final_step_delta = 0.0;
};

/// Subproblem hit the iteration cap far from a fixed point; carries the best iterate.
class NotConverged : public Error {
public:
    NotConverged(const std::string& msg, InnerSolution best, double residual)
        : Error(msg), best_(std::move(best)), residual_(residual) {}

    const InnerSolution& best() const { return best_; }
    double residual() const { return residual_; }

private:
    InnerSolution best_;
    double residual_;
};

/// Proximal operator of tau * ||.||_1: entrywise sign(x) * max(|x| - tau, 0).
inline Eigen::VectorXd soft_threshold(const Eigen::VectorXd& x, double tau) {
    Eigen::VectorXd out(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double mag = std::abs(x(i)) - tau;
        out(i) = mag > 0.0 ? (x(i) > 0.0 ? mag : -mag) : 0.0;
    }
    return out;
}

namespace detail {

// One backtracked prox step from y. Doubles lip until the quadratic upper
// bound at y majorizes the model at the candidate (exact test, the model
// itself is quadratic).
inline Eigen::VectorXd prox_step_backtracked(const QuadraticModel& model,
                                             double lambda4,
                                             const Eigen::VectorXd& y,
                                             double& lip) {
    const Eigen::VectorXd grad = model_gradient(model, y);
    for (;;) {
        Eigen::VectorXd z = soft_threshold(y - grad / lip, lambda4 / lip);
        const Eigen::VectorXd step = z - y;
        const double quad_gap =
            0.5 * step.dot(model.A * step) - 0.5 * lip * step.squaredNorm();
        if (quad_gap <= 0.0 || !z.allFinite()) return z;
        lip *= 2.0;
    }
}

inline double composite_value(const QuadraticModel& model, double lambda4,
                              const Eigen::VectorXd& w) {
    return model_value(model, w) + lambda4 * w.lpNorm<1>();
}

} // namespace detail

/**
 * Solve  min_w  model(w) + lambda4 ||w||_1  by accelerated proximal gradient
 * with a monotone safeguard: whenever the accelerated candidate raises the
 * composite objective, the plain proximal step from the previous iterate is
 * taken instead and the momentum restarts.
 *
 * The epigraph variable of the constrained formulation is recovered exactly
 * as y_star = lambda4 * ||w_star||_1: it enters the subproblem only through
 * "+ y" under the constraint lambda4 ||w||_1 <= y, so the optimum is tight.
 *
 * Terminates once ||w_{k+1} - w_k||_inf <= tol and the soft-threshold
 * fixed-point residual is within 10*tol. Throws NotConverged (carrying the
 * best iterate) if the iteration cap is hit with residual > 100*tol.
 *
 * When objective_log is given, the composite objective of every accepted
 * iterate is appended to it (convergence history diagnostic).
 */
inline InnerSolution solve_subproblem(const QuadraticModel& model, double lambda4,
                                      const InnerSettings& settings,
                                      const Eigen::VectorXd& warm_start,
                                      std::vector<double>* objective_log = nullptr) {
    if (warm_start.size() != model.b.size())
        throw DimensionError("solve_subproblem: warm start has length " +
                             std::to_string(warm_start.size()) + ", expected " +
                             std::to_string(model.b.size()));
    if (settings.max_iters < 1 || !(settings.tol > 0.0))
        throw ConfigError({"solve_subproblem: max_iters must be >= 1 and tol > 0"});

    const bool fixed = settings.step_rule == StepRule::fixed_lipschitz;
    double lip = fixed ? std::max(model.lipschitz, 1e-12) : 1.0;

    auto fixed_point_residual = [&](const Eigen::VectorXd& w) {
        const Eigen::VectorXd mapped =
            soft_threshold(w - model_gradient(model, w) / lip, lambda4 / lip);
        return (w - mapped).lpNorm<Eigen::Infinity>();
    };

    Eigen::VectorXd x = warm_start;
    double fx = detail::composite_value(model, lambda4, x);
    Eigen::VectorXd y = x;
    double momentum = 1.0;
    if (objective_log) objective_log->push_back(fx);

    InnerSolution sol;
    sol.w_star = x;
    sol.final_step_delta = std::numeric_limits<double>::infinity();

    int k = 0;
    bool converged = false;
    for (k = 1; k <= settings.max_iters; ++k) {
        Eigen::VectorXd z;
        if (fixed) {
            z = soft_threshold(y - model_gradient(model, y) / lip, lambda4 / lip);
        } else {
            z = detail::prox_step_backtracked(model, lambda4, y, lip);
        }
        double fz = z.allFinite() ? detail::composite_value(model, lambda4, z)
                                  : std::numeric_limits<double>::quiet_NaN();

        if (!(fz <= fx)) {
            // Accelerated point went uphill (or non-finite): fall back to the
            // plain prox step from x, which cannot increase the objective.
            if (fixed) {
                z = soft_threshold(x - model_gradient(model, x) / lip, lambda4 / lip);
            } else {
                z = detail::prox_step_backtracked(model, lambda4, x, lip);
            }
            if (!z.allFinite()) {
                sol.iters_used = k;
                sol.y_star = lambda4 * sol.w_star.lpNorm<1>();
                throw NotConverged("solve_subproblem: iterates diverged "
                                   "(subproblem is likely unbounded below)",
                                   sol, std::numeric_limits<double>::infinity());
            }
            fz = detail::composite_value(model, lambda4, z);
            momentum = 1.0;
            y = z;
        } else {
            const double next_momentum =
                0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
            y = z + ((momentum - 1.0) / next_momentum) * (z - x);
            momentum = next_momentum;
        }

        const double delta = (z - x).lpNorm<Eigen::Infinity>();
        x = z;
        fx = fz;
        sol.w_star = x;
        sol.final_step_delta = delta;
        if (objective_log) objective_log->push_back(fx);

        if (delta <= settings.tol && fixed_point_residual(x) <= 10.0 * settings.tol) {
            converged = true;
            break;
        }
    }
    sol.iters_used = std::min(k, settings.max_iters);
    sol.y_star = lambda4 * sol.w_star.lpNorm<1>();

    if (!converged) {
        const double residual = fixed_point_residual(sol.w_star);
        if (residual > 100.0 * settings.tol)
            throw NotConverged("solve_subproblem: iteration cap " +
                                   std::to_string(settings.max_iters) +
                                   " reached with fixed-point residual " +
                                   std::to_string(residual),
                               sol, residual);
    }
    return sol;
}

} // namespace mvskew

#endif // MVSKEW_INNER_SOLVER_HPP
