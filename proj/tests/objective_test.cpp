#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>

#include "mvskew/objective.hpp"
#include "support/instances.hpp"
#include "support/oracles.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using mvskew::ObjectiveParams;

namespace {

ObjectiveParams scalar_params(double mu, double sigma, double phi, double l1, double l2,
                              double l3, double l4) {
    ObjectiveParams p;
    p.lambda1 = l1;
    p.lambda2 = l2;
    p.lambda3 = l3;
    p.lambda4 = l4;
    p.moments.n = 1;
    p.moments.mu = Eigen::VectorXd::Constant(1, mu);
    p.moments.sigma = Eigen::MatrixXd::Constant(1, 1, sigma);
    p.moments.phi = Eigen::MatrixXd::Constant(1, 1, phi);
    return p;
}

} // namespace

TEST_CASE("eval_objective: zero weights zero everything", "[objective]") {
    const auto p = instances::sampled_params(4, 3, 1, 1, 1, 1);
    const auto b = mvskew::eval_objective(p, Eigen::VectorXd::Zero(4));
    CHECK(b.mean_term == 0.0);
    CHECK(b.variance_term == 0.0);
    CHECK(b.skewness_term == 0.0);
    CHECK(b.l1_term == 0.0);
    CHECK(b.total == 0.0);
}

TEST_CASE("eval_objective: scalar arithmetic", "[objective]") {
    const auto p = scalar_params(1.0, 1.0, 1.0, 1, 1, 1, 1);
    Eigen::VectorXd w(1);
    w << 2.0;
    const auto b = mvskew::eval_objective(p, w);
    CHECK_THAT(b.mean_term, WithinAbs(-2.0, 1e-15));
    CHECK_THAT(b.variance_term, WithinAbs(4.0, 1e-15));
    CHECK_THAT(b.skewness_term, WithinAbs(-8.0, 1e-15));
    CHECK_THAT(b.l1_term, WithinAbs(2.0, 1e-15));
    CHECK_THAT(b.smooth, WithinAbs(-6.0, 1e-15));
    CHECK_THAT(b.total, WithinAbs(-4.0, 1e-15));
}

TEST_CASE("eval_objective: matches an independent evaluation path", "[objective]") {
    const auto p = instances::sampled_params(6, 5, 0.8, 1.7, 0.6, 0.3);
    auto gen = instances::rng(777);
    for (int rep = 0; rep < 10; ++rep) {
        const auto w = instances::random_vector(gen, 6, -1.0, 1.0);
        const auto b = mvskew::eval_objective(p, w);
        const double want = -p.lambda1 * w.dot(p.moments.mu) +
                            p.lambda2 * w.dot(p.moments.sigma * w) -
                            p.lambda3 * oracles::trilinear(p.moments.phi, w, w, w) +
                            p.lambda4 * w.cwiseAbs().sum();
        CHECK_THAT(b.total, WithinRel(want, 1e-12));
        CHECK_THAT(b.total, WithinRel(b.smooth + b.l1_term, 1e-12));
    }
}

TEST_CASE("eval_objective: l1 term ignores signs", "[objective]") {
    const auto p = instances::sampled_params(5, 7, 1, 1, 1, 0.4);
    auto gen = instances::rng(888);
    const auto w = instances::random_vector(gen, 5, -1.0, 1.0);
    CHECK(mvskew::eval_objective(p, w).l1_term ==
          mvskew::eval_objective(p, w.cwiseAbs().eval()).l1_term);
}

TEST_CASE("eval_objective: deterministic evaluation", "[objective]") {
    const auto p = instances::sampled_params(6, 9, 1, 2, 1, 0.1);
    auto gen = instances::rng(999);
    const auto w = instances::random_vector(gen, 6, -1.0, 1.0);
    const auto a = mvskew::eval_objective(p, w);
    const auto b = mvskew::eval_objective(p, w);
    CHECK(a.total == b.total);
    CHECK(a.smooth == b.smooth);
}

TEST_CASE("smooth_gradient: closed forms at simple points", "[objective]") {
    const auto p = instances::sampled_params(5, 11, 1.3, 2.1, 0.9, 0.2);
    const Eigen::VectorXd at_zero = mvskew::smooth_gradient(p, Eigen::VectorXd::Zero(5));
    CHECK((at_zero + p.lambda1 * p.moments.mu).cwiseAbs().maxCoeff() == 0.0);

    auto pure_quad = p;
    pure_quad.lambda1 = 0.0;
    pure_quad.lambda3 = 0.0;
    auto gen = instances::rng(1212);
    const auto w = instances::random_vector(gen, 5, -1.0, 1.0);
    const Eigen::VectorXd g = mvskew::smooth_gradient(pure_quad, w);
    const Eigen::VectorXd want = 2.0 * pure_quad.lambda2 * (pure_quad.moments.sigma * w);
    CHECK((g - want).cwiseAbs().maxCoeff() <= 1e-14 * want.cwiseAbs().maxCoeff());
}

TEST_CASE("smooth_gradient: finite-difference agreement", "[objective]") {
    const auto p = instances::sampled_params(5, 13, 0.7, 1.9, 0.8, 0.0);
    auto gen = instances::rng(1313);
    auto smooth = [&p](const Eigen::VectorXd& x) {
        return mvskew::eval_objective(p, x).smooth;
    };
    for (int rep = 0; rep < 10; ++rep) {
        const auto w = instances::random_vector(gen, 5, -1.0, 1.0);
        const auto g = mvskew::smooth_gradient(p, w);
        const auto fd = oracles::central_diff_gradient(smooth, w, 1e-5);
        CHECK((g - fd).norm() <= 1e-6 * std::max(1.0, fd.norm()));
    }
}

TEST_CASE("risk_error_bound: exact cases", "[objective]") {
    Eigen::MatrixXd s1 = Eigen::MatrixXd::Identity(3, 3);
    Eigen::VectorXd w = Eigen::VectorXd::Ones(3);
    const auto same = mvskew::risk_error_bound(s1, s1, w);
    CHECK(same.bound == 0.0);
    CHECK(same.actual == 0.0);

    Eigen::MatrixXd hat(1, 1), truth(1, 1);
    hat << 2.0;
    truth << 1.0;
    Eigen::VectorXd w1(1);
    w1 << 3.0;
    const auto scalar = mvskew::risk_error_bound(hat, truth, w1);
    CHECK_THAT(scalar.bound, WithinAbs(9.0, 1e-15));
    CHECK_THAT(scalar.actual, WithinAbs(9.0, 1e-15));
}

TEST_CASE("risk_error_bound: actual never exceeds bound", "[objective]") {
    auto gen = instances::rng(1414);
    for (int rep = 0; rep < 1000; ++rep) {
        const Eigen::Index n = 4;
        Eigen::MatrixXd sigma = instances::spd_matrix(gen, n);
        Eigen::MatrixXd noise(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                noise(i, j) = instances::uniform(gen, -0.2, 0.2);
        noise = 0.5 * (noise + noise.transpose()).eval();
        const Eigen::MatrixXd sigma_hat = sigma + noise;
        const auto w = instances::random_vector(gen, n, -2.0, 2.0);
        const auto r = mvskew::risk_error_bound(sigma_hat, sigma, w);
        CHECK(r.actual <= r.bound + 1e-12);
    }
}

TEST_CASE("objective: dimension mismatches are rejected", "[objective]") {
    const auto p = instances::sampled_params(3, 15, 1, 1, 1, 1);
    const Eigen::VectorXd bad = Eigen::VectorXd::Zero(4);
    CHECK_THROWS_AS(mvskew::eval_objective(p, bad), mvskew::DimensionError);
    CHECK_THROWS_AS(mvskew::smooth_gradient(p, bad), mvskew::DimensionError);
    CHECK_THROWS_AS(
        mvskew::risk_error_bound(p.moments.sigma, p.moments.sigma, bad),
        mvskew::DimensionError);
}
