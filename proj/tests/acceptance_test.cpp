// Acceptance suite: one test case per release criterion, each printing a
// PASS line once its checks hold. Run via ctest ("acceptance") or directly:
//   ./acceptance_tests --success

#include <catch2/catch_amalgamated.hpp>

#include <chrono>
#include <cstdio>
#include <iostream>

#include <Eigen/Dense>

#include "mvskew/mvskew.hpp"
#include "support/instances.hpp"
#include "support/oracles.hpp"

using clock_type = std::chrono::steady_clock;

namespace {

constexpr std::uint64_t kInstanceSeed = 20240901;

mvskew::SolverConfig reference_config() {
    mvskew::SolverConfig config;
    config.lambda1 = 1.0;
    config.lambda2 = 4.0;
    config.lambda3 = 1.0;
    config.lambda4 = 0.05;
    config.seed = 17;
    return config;
}

const mvskew::MomentSet& reference_moments() {
    static const mvskew::MomentSet m =
        mvskew::estimate_moments(mvskew::generate_skewed_returns(500, 10, kInstanceSeed));
    return m;
}

mvskew::ObjectiveParams params_for(const mvskew::SolverConfig& c,
                                   const mvskew::MomentSet& m) {
    mvskew::ObjectiveParams p;
    p.lambda1 = c.lambda1;
    p.lambda2 = c.lambda2;
    p.lambda3 = c.lambda3;
    p.lambda4 = c.lambda4;
    p.moments = m;
    return p;
}

double seconds_since(clock_type::time_point start) {
    return std::chrono::duration<double>(clock_type::now() - start).count();
}

void report(int criterion, const std::string& text) {
    std::printf("PASS  criterion %2d: %s\n", criterion, text.c_str());
}

} // namespace

TEST_CASE("criterion 1: monotone objective descent", "[acceptance]") {
    const auto start = clock_type::now();
    const auto result = mvskew::run(reference_config(), reference_moments());
    const double elapsed = seconds_since(start);

    const auto& rec = result.trace.records;
    REQUIRE(rec.size() >= 2);
    for (std::size_t i = 1; i < rec.size(); ++i)
        REQUIRE(rec[i].objective_total <= rec[i - 1].objective_total + 1e-12);
    REQUIRE(elapsed < 5.0);
    report(1, "objective trace non-increasing at every step (within 1e-12), " +
                  std::to_string(rec.size()) + " records");
}

TEST_CASE("criterion 2: gradient-norm decay and final stationarity", "[acceptance]") {
    const auto start = clock_type::now();
    const auto config = reference_config();
    const auto result = mvskew::run(config, reference_moments());
    const double elapsed = seconds_since(start);

    REQUIRE(result.trace.terminated_by == mvskew::Termination::tolerance);
    const double initial = result.trace.records.front().smooth_grad_norm;
    const double final_norm = result.trace.records.back().smooth_grad_norm;
    REQUIRE(initial > 0.0);
    REQUIRE(final_norm < 0.1 * initial);

    const auto p = params_for(config, reference_moments());
    REQUIRE(mvskew::stationarity_residual(p, result.w_final) <= 1e-6);
    REQUIRE(elapsed < 5.0);
    char msg[128];
    std::snprintf(msg, sizeof(msg),
                  "gradient norm %.3g -> %.3g (%.1f%%), stationarity residual <= 1e-6",
                  initial, final_norm, 100.0 * final_norm / initial);
    report(2, msg);
}

TEST_CASE("criterion 3: skewness derivatives match finite differences",
          "[acceptance]") {
    const auto start = clock_type::now();
    auto gen = instances::rng(314159);
    for (int rep = 0; rep < 100; ++rep) {
        const Eigen::Index n = 2 + (rep % 7); // covers N = 2..8
        const auto m = instances::sampled_moments(n, 5000 + rep, 60);
        const auto w = instances::random_vector(gen, n, -1.0, 1.0);

        auto value = [&m](const Eigen::VectorXd& x) {
            return mvskew::skewness_value(m.phi, x);
        };
        const auto grad = mvskew::skewness_gradient(m.phi, w);
        const auto grad_fd = oracles::central_diff_gradient(value, w, 1e-5);
        REQUIRE((grad - grad_fd).norm() <= 1e-6 * std::max(1.0, grad_fd.norm()));

        auto gradient = [&m](const Eigen::VectorXd& x) {
            return mvskew::skewness_gradient(m.phi, x);
        };
        const auto hess = mvskew::skewness_hessian(m.phi, w);
        const auto hess_fd = oracles::central_diff_jacobian(gradient, w, 1e-5);
        REQUIRE((hess - hess_fd).norm() <= 1e-5 * std::max(1.0, hess_fd.norm()));
    }
    REQUIRE(seconds_since(start) < 10.0);
    report(3, "gradient (1e-6) and Hessian (1e-5) vs central differences, "
              "100 instances, N <= 8");
}

TEST_CASE("criterion 4: surrogate tangency at the anchor", "[acceptance]") {
    auto gen = instances::rng(271828);
    for (int rep = 0; rep < 100; ++rep) {
        const Eigen::Index n = 2 + (rep % 7);
        const auto p = instances::sampled_params(n, 7000 + rep, 1.0, 2.0, 1.5, 0.0);
        const auto anchor = instances::random_vector(gen, n, -1.0, 1.0);
        const auto model = mvskew::build_surrogate(p, anchor, 0.0);

        const double f0 = mvskew::eval_objective(p, anchor).smooth;
        REQUIRE(std::abs(mvskew::model_value(model, anchor) - f0) <=
                1e-10 * std::max(1.0, std::abs(f0)));
        const Eigen::VectorXd g0 = mvskew::smooth_gradient(p, anchor);
        REQUIRE((mvskew::model_gradient(model, anchor) - g0).norm() <=
                1e-10 * std::max(1.0, g0.norm()));
    }
    report(4, "model value and gradient match f at the anchor (1e-10), 100 instances");
}

TEST_CASE("criterion 5: exact agreement with a direct solve when lambda3 = 0",
          "[acceptance]") {
    auto gen = instances::rng(161803);
    for (int rep = 0; rep < 20; ++rep) {
        const Eigen::Index n = 2 + (rep % 9); // N <= 10
        mvskew::MomentSet m = instances::quadratic_moments(gen, n);

        mvskew::SolverConfig config;
        config.lambda1 = 1.0;
        config.lambda2 = 1.0;
        config.lambda3 = 0.0;
        config.lambda4 = 0.05 + 0.02 * (rep % 5);
        config.seed = 9000 + rep;
        const auto result = mvskew::run(config, m);

        mvskew::QuadraticModel model;
        model.A = 2.0 * config.lambda2 * m.sigma;
        model.b = -config.lambda1 * m.mu;
        model.c = 0.0;
        model.anchor = Eigen::VectorXd::Zero(n);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(model.A);
        model.lipschitz = es.eigenvalues().maxCoeff();
        model.min_eig = es.eigenvalues().minCoeff();

        mvskew::InnerSettings tight;
        tight.tol = 1e-12;
        tight.max_iters = 50000;
        const auto direct = mvskew::solve_subproblem(model, config.lambda4, tight,
                                                     Eigen::VectorXd::Zero(n));
        REQUIRE((result.w_final - direct.w_star).lpNorm<Eigen::Infinity>() <= 1e-8);
    }
    report(5, "SCA solution matches the direct proximal solve to 1e-8, 20 instances");
}

TEST_CASE("criterion 6: inner solutions satisfy the soft-threshold fixed point",
          "[acceptance]") {
    auto gen = instances::rng(141421);
    mvskew::InnerSettings settings;
    for (int rep = 0; rep < 50; ++rep) {
        const Eigen::Index n = 2 + (rep % 7);
        Eigen::MatrixXd a = instances::spd_matrix(gen, n);
        const Eigen::VectorXd b = instances::random_vector(gen, n, -2.0, 2.0);
        const double lambda4 = instances::uniform(gen, 0.0, 1.0);

        mvskew::QuadraticModel model;
        model.A = a;
        model.b = b;
        model.c = 0.0;
        model.anchor = Eigen::VectorXd::Zero(n);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
        model.lipschitz = es.eigenvalues().maxCoeff();
        model.min_eig = es.eigenvalues().minCoeff();

        const auto warm = instances::random_vector(gen, n, -1.0, 1.0);
        const auto sol = mvskew::solve_subproblem(model, lambda4, settings, warm);

        const double lip = std::max(model.lipschitz, 1e-12);
        const Eigen::VectorXd mapped = mvskew::soft_threshold(
            sol.w_star - (a * sol.w_star + b) / lip, lambda4 / lip);
        REQUIRE((sol.w_star - mapped).lpNorm<Eigen::Infinity>() <= 10.0 * settings.tol);
    }
    report(6, "fixed-point equation holds to 10*tol entrywise, 50 instances");
}

TEST_CASE("criterion 7: exact line search beats a 1e-4 grid", "[acceptance]") {
    auto gen = instances::rng(173205);
    for (int rep = 0; rep < 100; ++rep) {
        const Eigen::Index n = 2 + (rep % 5);
        const auto p = instances::sampled_params(n, 11000 + rep, 1.0, 1.5, 1.0, 0.1);
        const auto w = instances::random_vector(gen, n, -0.8, 0.8);
        const auto d = instances::random_vector(gen, n, -1.0, 1.0);
        const double y = instances::uniform(gen, 0.0, 1.0);
        const double y_delta = instances::uniform(gen, -1.0, 0.2);

        auto section = [&](double g) {
            return mvskew::eval_objective(p, (w + g * d).eval()).smooth + y + g * y_delta;
        };
        const double gamma = mvskew::exact_line_search(p, w, d, y, y_delta);
        REQUIRE(gamma >= 0.0);
        REQUIRE(gamma <= 1.0);
        const double best_grid = section(oracles::grid_min(section, 0.0, 1.0, 1e-4));
        REQUIRE(section(gamma) <= best_grid + 1e-10);
    }
    report(7, "returned gamma within 1e-10 of a 1e-4 grid minimum, 100 instances");
}

TEST_CASE("criterion 8: risk error never exceeds its bound", "[acceptance]") {
    auto gen = instances::rng(223606);
    int checked = 0;
    for (int rep = 0; rep < 1000; ++rep) {
        const Eigen::Index n = 2 + (rep % 5);
        Eigen::MatrixXd sigma(n, n), sigma_hat(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) {
                sigma(i, j) = instances::uniform(gen, -1.0, 1.0);
                sigma_hat(i, j) = sigma(i, j) + instances::uniform(gen, -0.3, 0.3);
            }
        const auto w = instances::random_vector(gen, n, -2.0, 2.0);
        const auto r = mvskew::risk_error_bound(sigma_hat, sigma, w);
        REQUIRE(r.actual <= r.bound + 1e-12);
        ++checked;
    }
    REQUIRE(checked == 1000);
    report(8, "actual <= bound on 1000 random draws, zero violations");
}

TEST_CASE("criterion 9: sparsity response at the lambda4 extremes", "[acceptance]") {
    auto config = reference_config();
    const auto& moments = reference_moments();

    auto p = params_for(config, moments);
    p.lambda4 = 0.0;
    const double grad0_inf =
        mvskew::smooth_gradient(p, Eigen::VectorXd::Zero(moments.n))
            .lpNorm<Eigen::Infinity>();
    REQUIRE(grad0_inf > 0.0);

    config.lambda4 = 10.0 * grad0_inf;
    const auto collapsed = mvskew::run(config, moments);
    REQUIRE(collapsed.trace.records.back().nnz == 0);

    config.lambda4 = 0.0;
    const auto dense = mvskew::run(config, moments);
    REQUIRE(dense.trace.records.back().nnz == static_cast<int>(moments.n));
    report(9, "nnz = 0 at lambda4 = 10*||grad f(0)||_inf and nnz = N at lambda4 = 0");
}

TEST_CASE("criterion 10: moment estimation equals the brute-force oracle",
          "[acceptance]") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const Eigen::Index n = 1 + static_cast<Eigen::Index>(seed % 5);
        const Eigen::Index t_obs = seed % 2 ? 50 : 23;
        const auto r = mvskew::generate_skewed_returns(t_obs, n, 12345 + seed);
        const auto m = mvskew::estimate_moments(r);
        const auto o = oracles::triple_loop_moments(r.data);
        REQUIRE((m.mu - o.mu).cwiseAbs().maxCoeff() <= 1e-14);
        REQUIRE((m.sigma - o.sigma).cwiseAbs().maxCoeff() <= 1e-14);
        REQUIRE((m.phi - o.phi).cwiseAbs().maxCoeff() <= 1e-14);
    }
    report(10, "estimator matches the triple-loop oracle to 1e-14 entrywise, "
               "N <= 5, T <= 50");
}
