#ifndef MVSKEW_SCA_HPP
#define MVSKEW_SCA_HPP

#include <chrono>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "mvskew/errors.hpp"
#include "mvskew/inner_solver.hpp"
#include "mvskew/moments.hpp"
#include "mvskew/objective.hpp"
#include "mvskew/surrogate.hpp"

namespace mvskew {

enum class InitMode { random_uniform, zeros, user_supplied };

/// Everything the outer loop needs besides the moments themselves.
struct SolverConfig {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double lambda3 = 0.0;
    double lambda4 = 0.0;
    InnerSettings inner;
    int max_outer_iters = 200;
    double outer_tol = 1e-8; // on ||Bw_t - w_t||_inf
    double epsilon_floor = 0.0;
    std::uint64_t seed = 1;
    InitMode init = InitMode::random_uniform;
    Eigen::VectorXd init_weights; // used only with InitMode::user_supplied
};

/// One row of the convergence trace.
struct IterateState {
    int t = 0;
    Eigen::VectorXd w;
    double y = 0.0;               // epigraph variable, >= lambda4 ||w||_1
    double objective_total = 0.0; // f(w) + y, the value the loop drives down
    double smooth_grad_norm = 0.0;
    double gamma = 0.0;           // step size that produced this iterate
    int nnz = 0;                  // entries with |w_i| > 1e-10
    int subproblem_iters = 0;
    bool inner_warning = false;   // inner solver hit its cap on this step
};

enum class Termination { tolerance, max_iters };

struct ConvergenceTrace {
    std::vector<IterateState> records;
    Termination terminated_by = Termination::max_iters;
    std::vector<double> wall_time_seconds; // aligned with records
};

struct RunResult {
    Eigen::VectorXd w_final;
    ConvergenceTrace trace;
};

namespace detail {

constexpr double kNnzThreshold = 1e-10;

inline int count_nonzero(const Eigen::VectorXd& w) {
    int nnz = 0;
    for (Eigen::Index i = 0; i < w.size(); ++i)
        if (std::abs(w(i)) > kNnzThreshold) ++nnz;
    return nnz;
}

// Uniform double in [0, 1) from the top 53 bits of the generator output,
// pinned so that results do not depend on library distribution internals.
inline double uniform01(std::uint64_t raw) {
    return static_cast<double>(raw >> 11) * 0x1.0p-53;
}

} // namespace detail

/**
 * Exact line search along the segment w + gamma * d, gamma in [0, 1], for
 * the upper model
 *
 *   phi(gamma) = f(w + gamma d) + y + gamma * y_delta,
 *
 * which is a cubic polynomial in gamma because f is cubic in w. The
 * coefficients are assembled from moment contractions (valid for
 * supersymmetric phi), the stationary points of the cubic inside (0, 1) are
 * found in closed form, and the best of {0, 1, interior roots} is returned;
 * ties go to the larger gamma. The offset y shifts phi uniformly and cannot
 * move the minimizer.
 */
inline double exact_line_search(const ObjectiveParams& params, const Eigen::VectorXd& w,
                                const Eigen::VectorXd& d, [[maybe_unused]] double y,
                                double y_delta) {
    detail::check_weight_dims(params, w, "exact_line_search");
    if (d.size() != w.size())
        throw DimensionError("exact_line_search: direction length mismatch");
    const MomentSet& m = params.moments;

    const double c1 = -params.lambda1 * d.dot(m.mu) +
                      2.0 * params.lambda2 * w.dot(m.sigma * d) -
                      3.0 * params.lambda3 * trilinear(m.phi, d, w, w) + y_delta;
    const double c2 = params.lambda2 * d.dot(m.sigma * d) -
                      3.0 * params.lambda3 * trilinear(m.phi, d, d, w);
    const double c3 = -params.lambda3 * trilinear(m.phi, d, d, d);

    // phi relative to its constant term; phi(0) is exactly 0 by construction
    // (never evaluated through Horner, which would turn an overflowed
    // coefficient into 0 * inf = NaN).
    auto phi = [&](double g) { return g * (c1 + g * (c2 + g * c3)); };

    double candidates[3] = {1.0, 0.0, 0.0};
    int n_cand = 1;

    // Stationary points: c1 + 2 c2 g + 3 c3 g^2 = 0.
    if (c3 == 0.0) {
        if (c2 != 0.0) {
            const double root = -c1 / (2.0 * c2);
            if (root > 0.0 && root < 1.0) candidates[n_cand++] = root;
        }
    } else {
        const double qa = 3.0 * c3, qb = 2.0 * c2, qc = c1;
        const double disc = qb * qb - 4.0 * qa * qc;
        if (disc >= 0.0) {
            const double sq = std::sqrt(disc);
            const double q = -0.5 * (qb + (qb >= 0.0 ? sq : -sq));
            const double roots[2] = {q / qa, qc != 0.0 && q != 0.0 ? qc / q : 0.0};
            for (double root : roots)
                if (root > 0.0 && root < 1.0) candidates[n_cand++] = root;
        }
    }

    double best_gamma = 0.0;
    double best_value = 0.0;
    for (int i = 0; i < n_cand; ++i) {
        const double v = phi(candidates[i]);
        const bool better = v < best_value ||
                            (v == best_value && candidates[i] > best_gamma);
        if (better) {
            best_gamma = candidates[i];
            best_value = v;
        }
    }
    return best_gamma;
}

/**
 * Natural-map residual || w - soft_threshold(w - grad f(w), lambda4) ||_inf.
 * Zero exactly at stationary points of the composite objective.
 */
inline double stationarity_residual(const ObjectiveParams& params,
                                    const Eigen::VectorXd& w) {
    detail::check_weight_dims(params, w, "stationarity_residual");
    const Eigen::VectorXd mapped =
        soft_threshold(w - smooth_gradient(params, w), params.lambda4);
    return (w - mapped).lpNorm<Eigen::Infinity>();
}

namespace detail {

inline Eigen::VectorXd initial_weights(const SolverConfig& config, Eigen::Index n) {
    switch (config.init) {
        case InitMode::zeros:
            return Eigen::VectorXd::Zero(n);
        case InitMode::user_supplied:
            if (config.init_weights.size() != n)
                throw DimensionError("run: user-supplied init has length " +
                                     std::to_string(config.init_weights.size()) +
                                     ", expected " + std::to_string(n));
            if (!config.init_weights.allFinite())
                throw NonFiniteError("run: user-supplied init is not finite");
            return config.init_weights;
        case InitMode::random_uniform:
        default: {
            // Uniform on [-1/N, 1/N]: small enough to keep the cubic term tame.
            std::mt19937_64 rng(config.seed);
            Eigen::VectorXd w(n);
            const double scale = 1.0 / static_cast<double>(n);
            for (Eigen::Index i = 0; i < n; ++i)
                w(i) = scale * (2.0 * uniform01(rng()) - 1.0);
            return w;
        }
    }
}

inline void validate_config(const SolverConfig& config) {
    std::vector<std::string> issues;
    auto check_lambda = [&](double v, const char* name) {
        if (!(v >= 0.0) || !std::isfinite(v))
            issues.push_back(std::string(name) + " must be finite and >= 0");
    };
    check_lambda(config.lambda1, "lambda1");
    check_lambda(config.lambda2, "lambda2");
    check_lambda(config.lambda3, "lambda3");
    check_lambda(config.lambda4, "lambda4");
    if (config.max_outer_iters < 1) issues.push_back("max_outer_iters must be >= 1");
    if (!(config.outer_tol > 0.0)) issues.push_back("outer_tol must be > 0");
    if (!(config.epsilon_floor >= 0.0)) issues.push_back("epsilon_floor must be >= 0");
    if (config.inner.max_iters < 1) issues.push_back("inner max_iters must be >= 1");
    if (!(config.inner.tol > 0.0)) issues.push_back("inner tol must be > 0");
    if (!issues.empty()) throw ConfigError(std::move(issues));
}

} // namespace detail

/**
 * Outer successive-convex-approximation loop.
 *
 * Per iteration: build the convexified quadratic surrogate at w_t, solve the
 * l1-penalized subproblem for the best response Bw_t and its tight epigraph
 * value y* = lambda4 ||Bw_t||_1, pick the step by exact line search on the
 * cubic upper model, and move (w, y) by the convex-combination update
 * w_{t+1} = w_t + gamma (Bw_t - w_t), y_{t+1} = y_t + gamma (y* - y_t).
 *
 * Stops when ||Bw_t - w_t||_inf <= outer_tol or the iteration cap is hit.
 * The trace records every iterate including t = 0; the recorded objective is
 * f(w_t) + y_t, which the line search makes non-increasing by construction
 * (it equals the composite objective whenever y is tight).
 *
 * An inner solver that hits its cap is downgraded to a warning flag on the
 * record. A non-finite objective aborts with NonFiniteError: the cubic term
 * is unbounded below, so runaway iterates mean lambda3 is too large (or
 * lambda2/lambda4 too small) for this instance.
 */
inline RunResult run(const SolverConfig& config, const MomentSet& moments) {
    detail::validate_config(config);
    const Eigen::Index n = moments.n;

    ObjectiveParams params;
    params.lambda1 = config.lambda1;
    params.lambda2 = config.lambda2;
    params.lambda3 = config.lambda3;
    params.lambda4 = config.lambda4;
    params.moments = moments;

    using clock = std::chrono::steady_clock;
    auto tick = clock::now();
    auto lap = [&tick]() {
        const auto now = clock::now();
        const double s = std::chrono::duration<double>(now - tick).count();
        tick = now;
        return s;
    };

    Eigen::VectorXd w = detail::initial_weights(config, n);
    double y = config.lambda4 * w.lpNorm<1>(); // tight start: no artificial slack

    ConvergenceTrace trace;
    auto record = [&](int t, double gamma, int inner_iters, bool warning) {
        IterateState s;
        s.t = t;
        s.w = w;
        s.y = y;
        s.objective_total = eval_objective(params, w).smooth + y;
        s.smooth_grad_norm = smooth_gradient(params, w).norm();
        s.gamma = gamma;
        s.nnz = detail::count_nonzero(w);
        s.subproblem_iters = inner_iters;
        s.inner_warning = warning;
        if (!std::isfinite(s.objective_total))
            throw NonFiniteError(
                "run: objective became non-finite at iteration " + std::to_string(t) +
                "; the skewness term is unbounded below -- try a smaller lambda3 "
                "or a larger lambda4/lambda2");
        trace.records.push_back(std::move(s));
        trace.wall_time_seconds.push_back(lap());
    };

    record(0, 0.0, 0, false);

    trace.terminated_by = Termination::max_iters;
    for (int t = 0; t < config.max_outer_iters; ++t) {
        const QuadraticModel model = build_surrogate(params, w, config.epsilon_floor);

        InnerSolution sol;
        bool warning = false;
        try {
            sol = solve_subproblem(model, config.lambda4, config.inner, w);
        } catch (const NotConverged& e) {
            sol = e.best();
            warning = true;
        }

        const Eigen::VectorXd d = sol.w_star - w;
        if (d.lpNorm<Eigen::Infinity>() <= config.outer_tol) {
            trace.terminated_by = Termination::tolerance;
            break;
        }

        const double y_delta = sol.y_star - y;
        const double gamma = exact_line_search(params, w, d, y, y_delta);

        w += gamma * d;
        y += gamma * y_delta;
        record(t + 1, gamma, sol.iters_used, warning);
    }

    return RunResult{w, std::move(trace)};
}

} // namespace mvskew

#endif // MVSKEW_SCA_HPP
