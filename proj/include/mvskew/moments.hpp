#ifndef MVSKEW_MOMENTS_HPP
#define MVSKEW_MOMENTS_HPP

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mvskew/errors.hpp"

namespace mvskew {

/**
 * Raw input: T observations (rows) by N assets (columns) of simple returns
 * per period. Asset names are optional; when present there must be one per
 * column.
 */
struct ReturnsMatrix {
    Eigen::MatrixXd data;
    std::vector<std::string> asset_names;

    Eigen::Index periods() const { return data.rows(); }
    Eigen::Index assets() const { return data.cols(); }
};

/**
 * First three central moments of an asset-return distribution.
 *
 * `phi` is the coskewness matrix: the N x N^2 flattening of the third
 * central moment tensor, with column j*N + k (0-based) holding the (j,k)
 * pair so that phi * kron(w, w) contracts the last two indices. As a
 * 3-tensor it is supersymmetric: phi(i, j*N + k) is invariant under all
 * six permutations of (i, j, k).
 */
struct MomentSet {
    Eigen::VectorXd mu;     // length n
    Eigen::MatrixXd sigma;  // n x n, symmetric PSD
    Eigen::MatrixXd phi;    // n x n^2
    Eigen::Index n = 0;
};

namespace detail {

inline void check_phi_dims(const Eigen::MatrixXd& phi, Eigen::Index n,
                           const char* who) {
    if (phi.rows() != n || phi.cols() != n * n)
        throw DimensionError(std::string(who) + ": coskewness matrix is " +
                             std::to_string(phi.rows()) + "x" +
                             std::to_string(phi.cols()) + ", expected " +
                             std::to_string(n) + "x" + std::to_string(n * n));
}

} // namespace detail

/**
 * Third-moment contraction a' * Phi * kron(b, c) = sum_{ijk} Phi_ijk a_i b_j c_k.
 *
 * Computed by an explicit index loop; the Kronecker product is never formed.
 */
inline double trilinear(const Eigen::MatrixXd& phi, const Eigen::VectorXd& a,
                        const Eigen::VectorXd& b, const Eigen::VectorXd& c) {
    const Eigen::Index n = a.size();
    if (b.size() != n || c.size() != n)
        throw DimensionError("trilinear: vector lengths disagree");
    detail::check_phi_dims(phi, n, "trilinear");

    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        double row = 0.0;
        for (Eigen::Index j = 0; j < n; ++j) {
            double inner = 0.0;
            for (Eigen::Index k = 0; k < n; ++k)
                inner += phi(i, j * n + k) * c(k);
            row += b(j) * inner;
        }
        total += a(i) * row;
    }
    return total;
}

/// Portfolio skewness w' * Phi * kron(w, w).
inline double skewness_value(const Eigen::MatrixXd& phi, const Eigen::VectorXd& w) {
    detail::check_phi_dims(phi, w.size(), "skewness_value");
    return trilinear(phi, w, w, w);
}

/**
 * Gradient of the skewness, 3 * Phi * kron(w, w).
 *
 * The factor 3 collapses the three product-rule terms and is exact only for
 * supersymmetric phi, which estimate_moments guarantees.
 */
inline Eigen::VectorXd skewness_gradient(const Eigen::MatrixXd& phi,
                                         const Eigen::VectorXd& w) {
    const Eigen::Index n = w.size();
    detail::check_phi_dims(phi, n, "skewness_gradient");

    Eigen::VectorXd g(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double acc = 0.0;
        for (Eigen::Index j = 0; j < n; ++j) {
            double inner = 0.0;
            for (Eigen::Index k = 0; k < n; ++k)
                inner += phi(i, j * n + k) * w(k);
            acc += w(j) * inner;
        }
        g(i) = 3.0 * acc;
    }
    return g;
}

/**
 * Hessian of the skewness, 6 * Phi * kron(I, w), symmetrized after assembly
 * to absorb rounding. Entry (i, m) is 6 * sum_k phi(i, m*N + k) w_k.
 */
inline Eigen::MatrixXd skewness_hessian(const Eigen::MatrixXd& phi,
                                        const Eigen::VectorXd& w) {
    const Eigen::Index n = w.size();
    detail::check_phi_dims(phi, n, "skewness_hessian");

    Eigen::MatrixXd h(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index m = 0; m < n; ++m) {
            double inner = 0.0;
            for (Eigen::Index k = 0; k < n; ++k)
                inner += phi(i, m * n + k) * w(k);
            h(i, m) = 6.0 * inner;
        }
    }
    h = 0.5 * (h + h.transpose()).eval();
    return h;
}

/**
 * Estimate mean, covariance and coskewness from raw returns with population
 * (1/T) normalization. The covariance is symmetrized as (A + A')/2 after
 * accumulation; the coskewness is exactly supersymmetric by construction
 * (each canonical triple i <= j <= k is accumulated once and written to all
 * six permuted slots).
 *
 * Throws DimensionError if T < 2 or N < 1, NonFiniteError on NaN/Inf input.
 */
inline MomentSet estimate_moments(const ReturnsMatrix& returns) {
    const Eigen::Index t_obs = returns.periods();
    const Eigen::Index n = returns.assets();
    if (t_obs < 2)
        throw DimensionError("estimate_moments: need at least 2 observations, got " +
                             std::to_string(t_obs));
    if (n < 1)
        throw DimensionError("estimate_moments: need at least 1 asset");
    if (!returns.data.allFinite())
        throw NonFiniteError("estimate_moments: returns contain NaN or Inf");

    const Eigen::MatrixXd& r = returns.data;

    MomentSet m;
    m.n = n;
    m.mu.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double acc = 0.0;
        for (Eigen::Index t = 0; t < t_obs; ++t) acc += r(t, i);
        m.mu(i) = acc / static_cast<double>(t_obs);
    }

    Eigen::MatrixXd centered = r.rowwise() - m.mu.transpose();

    m.sigma.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) {
            double acc = 0.0;
            for (Eigen::Index t = 0; t < t_obs; ++t)
                acc += centered(t, i) * centered(t, j);
            const double v = acc / static_cast<double>(t_obs);
            m.sigma(i, j) = v;
            m.sigma(j, i) = v;
        }
    }
    m.sigma = 0.5 * (m.sigma + m.sigma.transpose()).eval();

    m.phi.resize(n, n * n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) {
            for (Eigen::Index k = j; k < n; ++k) {
                double acc = 0.0;
                for (Eigen::Index t = 0; t < t_obs; ++t)
                    acc += centered(t, i) * centered(t, j) * centered(t, k);
                const double v = acc / static_cast<double>(t_obs);
                m.phi(i, j * n + k) = v;
                m.phi(i, k * n + j) = v;
                m.phi(j, i * n + k) = v;
                m.phi(j, k * n + i) = v;
                m.phi(k, i * n + j) = v;
                m.phi(k, j * n + i) = v;
            }
        }
    }
    return m;
}

/**
 * Symmetrize a user-supplied coskewness matrix by averaging over the six
 * index permutations. A matrix that is already supersymmetric comes back
 * bit-identical (the correction term is exactly zero).
 */
inline Eigen::MatrixXd symmetrize_coskewness(const Eigen::MatrixXd& phi,
                                             Eigen::Index n) {
    detail::check_phi_dims(phi, n, "symmetrize_coskewness");
    Eigen::MatrixXd out(n, n * n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) {
            for (Eigen::Index k = j; k < n; ++k) {
                const double base = phi(i, j * n + k);
                double corr = (phi(i, k * n + j) - base) + (phi(j, i * n + k) - base) +
                              (phi(j, k * n + i) - base) + (phi(k, i * n + j) - base) +
                              (phi(k, j * n + i) - base);
                const double v = base + corr / 6.0;
                out(i, j * n + k) = v;
                out(i, k * n + j) = v;
                out(j, i * n + k) = v;
                out(j, k * n + i) = v;
                out(k, i * n + j) = v;
                out(k, j * n + i) = v;
            }
        }
    }
    return out;
}

/// Largest absolute deviation of phi from supersymmetry over all index triples.
inline double supersymmetry_defect(const Eigen::MatrixXd& phi, Eigen::Index n) {
    detail::check_phi_dims(phi, n, "supersymmetry_defect");
    double worst = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i; j < n; ++j)
            for (Eigen::Index k = j; k < n; ++k) {
                const double base = phi(i, j * n + k);
                const double alts[5] = {phi(i, k * n + j), phi(j, i * n + k),
                                        phi(j, k * n + i), phi(k, i * n + j),
                                        phi(k, j * n + i)};
                for (double a : alts)
                    worst = std::max(worst, std::abs(a - base));
            }
    return worst;
}

} // namespace mvskew

#endif // MVSKEW_MOMENTS_HPP
