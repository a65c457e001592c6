#ifndef MVSKEW_SYNTHETIC_HPP
#define MVSKEW_SYNTHETIC_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "mvskew/errors.hpp"
#include "mvskew/moments.hpp"

namespace mvskew {

/**
 * Seeded generator of skewed asset returns for experiments and tests.
 *
 * Each asset mixes an idiosyncratic and a common shock, both built from
 * centered, unit-variance squared Gaussians ((g^2 - 1)/sqrt(2), skewness
 * 2*sqrt(2)), with a random sign per asset so the cross-section carries both
 * left- and right-skewed names. Per-asset drifts are drawn from [0.2, 1.0]
 * and volatilities from [0.5, 1.5], so mean, covariance and coskewness are
 * all O(1).
 *
 * Determinism: draws are mapped from raw mt19937_64 output directly (top 53
 * bits), so the stream depends only on the seed, not on standard-library
 * distribution internals.
 */
inline ReturnsMatrix generate_skewed_returns(Eigen::Index periods, Eigen::Index assets,
                                             std::uint64_t seed) {
    if (periods < 2 || assets < 1)
        throw DimensionError("generate_skewed_returns: need periods >= 2 and assets >= 1");

    std::mt19937_64 rng(seed);
    auto uniform01 = [&rng]() {
        return static_cast<double>(rng() >> 11) * 0x1.0p-53;
    };
    auto gauss = [&]() {
        // Box-Muller; 1 - u keeps the log argument in (0, 1].
        const double u1 = 1.0 - uniform01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    };
    auto skewed_unit = [&]() {
        const double g = gauss();
        return (g * g - 1.0) / std::sqrt(2.0);
    };

    Eigen::VectorXd drift(assets), vol(assets), sign(assets);
    for (Eigen::Index i = 0; i < assets; ++i) {
        drift(i) = 0.2 + 0.8 * uniform01();
        vol(i) = 0.5 + 1.0 * uniform01();
        sign(i) = uniform01() < 0.5 ? 1.0 : -1.0;
    }

    const double common_load = std::sqrt(0.3);
    const double idio_load = std::sqrt(0.7);

    ReturnsMatrix out;
    out.data.resize(periods, assets);
    for (Eigen::Index t = 0; t < periods; ++t) {
        const double common = skewed_unit();
        for (Eigen::Index i = 0; i < assets; ++i) {
            const double shock = idio_load * sign(i) * skewed_unit() + common_load * common;
            out.data(t, i) = drift(i) + vol(i) * shock;
        }
    }
    out.asset_names.reserve(static_cast<std::size_t>(assets));
    for (Eigen::Index i = 0; i < assets; ++i)
        out.asset_names.push_back("asset_" + std::to_string(i + 1));
    return out;
}

} // namespace mvskew

#endif // MVSKEW_SYNTHETIC_HPP
