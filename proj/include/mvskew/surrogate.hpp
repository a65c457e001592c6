#ifndef MVSKEW_SURROGATE_HPP
#define MVSKEW_SURROGATE_HPP

#include <Eigen/Dense>

#include "mvskew/errors.hpp"
#include "mvskew/objective.hpp"

namespace mvskew {

/**
 * Convex quadratic model of the smooth objective around an anchor point,
 * in canonical form
 *
 *   m(w) = c + b'w + (1/2) w'A w.
 *
 * A is symmetric with every eigenvalue >= the convexification floor used at
 * build time. The model agrees with the smooth objective in value and
 * gradient at the anchor; only the curvature is altered by convexification.
 */
struct QuadraticModel {
    Eigen::MatrixXd A;      // quadratic coefficient, symmetric PSD
    Eigen::VectorXd b;      // linear coefficient
    double c = 0.0;         // constant
    Eigen::VectorXd anchor; // point the model was built at
    double lipschitz = 0.0; // max eigenvalue of A (gradient Lipschitz constant)
    double min_eig = 0.0;   // min eigenvalue of A after clipping
};

/**
 * Build the surrogate at w_t.
 *
 * The exactly convex terms -lambda1 w'mu + lambda2 w'Sigma w are kept as is;
 * the cubic skewness term is replaced by its second-order Taylor expansion
 * around w_t. The combined quadratic coefficient 2*lambda2*Sigma +
 * Hess(-lambda3 * skewness) can be indefinite, so its eigenvalues are
 * clipped from below at epsilon_floor before the model is expanded to
 * canonical (c, b, A) form. Clipping changes curvature only, so tangency of
 * value and slope at w_t survives by construction.
 *
 * Throws EigenFailure if the symmetric eigensolver does not converge.
 */
inline QuadraticModel build_surrogate(const ObjectiveParams& params,
                                      const Eigen::VectorXd& w_t,
                                      double epsilon_floor) {
    detail::check_weight_dims(params, w_t, "build_surrogate");
    const MomentSet& m = params.moments;

    Eigen::MatrixXd a_raw = 2.0 * params.lambda2 * m.sigma;
    if (params.lambda3 != 0.0)
        a_raw -= params.lambda3 * skewness_hessian(m.phi, w_t);
    a_raw = 0.5 * (a_raw + a_raw.transpose()).eval();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a_raw);
    if (es.info() != Eigen::Success)
        throw EigenFailure("build_surrogate: eigendecomposition did not converge");

    Eigen::VectorXd evals = es.eigenvalues().cwiseMax(epsilon_floor);

    QuadraticModel model;
    model.A = es.eigenvectors() * evals.asDiagonal() * es.eigenvectors().transpose();
    model.A = 0.5 * (model.A + model.A.transpose()).eval();
    model.lipschitz = evals.maxCoeff();
    model.min_eig = evals.minCoeff();
    model.anchor = w_t;

    // Expand f(w_t) + grad'(w - w_t) + 1/2 (w - w_t)'A(w - w_t) to (c, b, A).
    const double value_at_anchor = eval_objective(params, w_t).smooth;
    const Eigen::VectorXd grad_at_anchor = smooth_gradient(params, w_t);
    const Eigen::VectorXd a_wt = model.A * w_t;
    model.b = grad_at_anchor - a_wt;
    model.c = value_at_anchor - grad_at_anchor.dot(w_t) + 0.5 * w_t.dot(a_wt);
    return model;
}

/// Evaluate the model: c + b'w + (1/2) w'A w.
inline double model_value(const QuadraticModel& model, const Eigen::VectorXd& w) {
    if (w.size() != model.b.size())
        throw DimensionError("model_value: weight vector has length " +
                             std::to_string(w.size()) + ", expected " +
                             std::to_string(model.b.size()));
    return model.c + model.b.dot(w) + 0.5 * w.dot(model.A * w);
}

/// Gradient of the model: b + A w.
inline Eigen::VectorXd model_gradient(const QuadraticModel& model,
                                      const Eigen::VectorXd& w) {
    if (w.size() != model.b.size())
        throw DimensionError("model_gradient: weight vector has length " +
                             std::to_string(w.size()) + ", expected " +
                             std::to_string(model.b.size()));
    return model.b + model.A * w;
}

} // namespace mvskew

#endif // MVSKEW_SURROGATE_HPP
