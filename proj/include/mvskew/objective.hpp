#ifndef MVSKEW_OBJECTIVE_HPP
#define MVSKEW_OBJECTIVE_HPP

#include <cmath>

#include <Eigen/Dense>

#include "mvskew/errors.hpp"
#include "mvskew/moments.hpp"

namespace mvskew {

/**
 * Weights of the composite portfolio objective
 *
 *   F(w) = -lambda1 * w'mu + lambda2 * w'Sigma w
 *          - lambda3 * w'Phi kron(w,w) + lambda4 * ||w||_1
 *
 * together with the moments they act on. All lambdas must be finite and
 * nonnegative.
 */
struct ObjectiveParams {
    double lambda1 = 0.0;  // mean reward
    double lambda2 = 0.0;  // variance penalty
    double lambda3 = 0.0;  // skewness reward
    double lambda4 = 0.0;  // l1 sparsity penalty
    MomentSet moments;
};

/// Per-term decomposition of the objective at one point.
struct ObjectiveBreakdown {
    double mean_term = 0.0;      // -lambda1 * w'mu
    double variance_term = 0.0;  // lambda2 * w'Sigma w
    double skewness_term = 0.0;  // -lambda3 * w'Phi kron(w,w)
    double l1_term = 0.0;        // lambda4 * ||w||_1
    double smooth = 0.0;         // sum of the first three (the differentiable part)
    double total = 0.0;          // smooth + l1_term
};

/// Result of the covariance-perturbation risk check.
struct RiskErrorBound {
    double bound = 0.0;   // max|sigma_hat - sigma| * ||w||_1^2
    double actual = 0.0;  // |w'sigma_hat w - w'sigma w|
};

namespace detail {

inline void check_weight_dims(const ObjectiveParams& params, const Eigen::VectorXd& w,
                              const char* who) {
    if (w.size() != params.moments.n)
        throw DimensionError(std::string(who) + ": weight vector has length " +
                             std::to_string(w.size()) + ", expected " +
                             std::to_string(params.moments.n));
}

} // namespace detail

/// Evaluate every term of the objective at w.
inline ObjectiveBreakdown eval_objective(const ObjectiveParams& params,
                                         const Eigen::VectorXd& w) {
    detail::check_weight_dims(params, w, "eval_objective");
    const MomentSet& m = params.moments;

    ObjectiveBreakdown out;
    out.mean_term = -params.lambda1 * w.dot(m.mu);
    out.variance_term = params.lambda2 * w.dot(m.sigma * w);
    out.skewness_term = -params.lambda3 * skewness_value(m.phi, w);
    out.l1_term = params.lambda4 * w.lpNorm<1>();
    out.smooth = out.mean_term + out.variance_term + out.skewness_term;
    out.total = out.smooth + out.l1_term;
    return out;
}

/// Gradient of the smooth part: -lambda1*mu + 2*lambda2*Sigma w - 3*lambda3*Phi kron(w,w).
inline Eigen::VectorXd smooth_gradient(const ObjectiveParams& params,
                                       const Eigen::VectorXd& w) {
    detail::check_weight_dims(params, w, "smooth_gradient");
    const MomentSet& m = params.moments;

    Eigen::VectorXd g = -params.lambda1 * m.mu;
    g.noalias() += 2.0 * params.lambda2 * (m.sigma * w);
    if (params.lambda3 != 0.0)
        g -= params.lambda3 * skewness_gradient(m.phi, w);
    return g;
}

/**
 * Bound on the quadratic-risk error caused by replacing the true covariance
 * with an estimate:
 *
 *   |w'S_hat w - w'S w| <= max_ij |S_hat - S| * ||w||_1^2
 *
 * Returns both sides. The actual error never exceeds the bound (Hoelder),
 * up to rounding.
 */
inline RiskErrorBound risk_error_bound(const Eigen::MatrixXd& sigma_hat,
                                       const Eigen::MatrixXd& sigma_true,
                                       const Eigen::VectorXd& w) {
    const Eigen::Index n = w.size();
    if (sigma_hat.rows() != n || sigma_hat.cols() != n || sigma_true.rows() != n ||
        sigma_true.cols() != n)
        throw DimensionError("risk_error_bound: matrix dimensions do not match weights");

    RiskErrorBound out;
    const double linf = (sigma_hat - sigma_true).cwiseAbs().maxCoeff();
    const double l1 = w.lpNorm<1>();
    out.bound = linf * l1 * l1;
    out.actual = std::abs(w.dot(sigma_hat * w) - w.dot(sigma_true * w));
    return out;
}

} // namespace mvskew

#endif // MVSKEW_OBJECTIVE_HPP
