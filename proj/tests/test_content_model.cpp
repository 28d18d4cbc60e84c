#include <gtest/gtest.h>

#include <random>

#include "cachesec/content_model.hpp"
#include "oracles.hpp"

using namespace cachesec;

namespace {

// Frozen from oracle::zipf_norm / zipf_head (long double direct summation).
constexpr double kNorm100 = 8.13443642804101; // sum_{j=1..100} j^-0.8
constexpr double kHead5 = 2.59541573402249;  // sum_{j=1..5} j^-0.8

} // namespace

TEST(ZipfPopularity, SingleFileIsCertain)
{
    const auto p = zipf_popularity({1, 0, 2.0});
    ASSERT_EQ(p.size(), 1u);
    EXPECT_DOUBLE_EQ(p[0], 1.0);
}

TEST(ZipfPopularity, ZeroSkewIsUniform)
{
    const auto p = zipf_popularity({4, 0, 0.0});
    for (double v : p.probabilities()) {
        EXPECT_DOUBLE_EQ(v, 0.25);
    }
}

TEST(ZipfPopularity, FrozenConstantsMatchOracle)
{
    EXPECT_NEAR(static_cast<double>(oracle::zipf_norm(100, 0.8)), kNorm100, 1e-12);
    EXPECT_NEAR(static_cast<double>(oracle::zipf_head(5, 0.8)), kHead5, 1e-12);
}

TEST(ZipfPopularity, HeadProbabilityMatchesDirectSum)
{
    const auto p = zipf_popularity({100, 5, 0.8});
    EXPECT_NEAR(p[0], 1.0 / kNorm100, 1e-14);
    EXPECT_NEAR(p[99], std::pow(100.0, -0.8) / kNorm100, 1e-15);
}

TEST(ZipfPopularity, EmptyLibraryRejected)
{
    EXPECT_THROW(zipf_popularity({0, 0, 0.8}), ParameterError);
}

TEST(ZipfPopularity, ProfileInvariantsOnRandomParameters)
{
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::size_t> files(1, 2000);
    std::uniform_real_distribution<double> skew(0.0, 3.0);
    for (int trial = 0; trial < 200; ++trial) {
        const ContentParams params{files(rng), 0, skew(rng)};
        const auto p = zipf_popularity(params);
        double sum = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            ASSERT_GT(p[i], 0.0);
            if (i > 0) {
                if (params.zipf_skew > 0.0) {
                    ASSERT_LT(p[i], p[i - 1]);
                } else {
                    ASSERT_EQ(p[i], p[i - 1]);
                }
            }
            sum += p[i];
        }
        ASSERT_NEAR(sum, 1.0, 1e-12);
    }
}

TEST(HitProbability, EdgeCacheSizes)
{
    const auto p = zipf_popularity({100, 5, 0.8});
    EXPECT_EQ(hit_probability(p, 100), 1.0);
    EXPECT_EQ(hit_probability(p, 0), 0.0);
    EXPECT_THROW(hit_probability(p, 101), ParameterError);
}

TEST(HitProbability, DefaultsMatchDirectSum)
{
    EXPECT_NEAR(hit_probability(ContentParams{100, 5, 0.8}), kHead5 / kNorm100, 1e-14);
}

TEST(HitProbability, NondecreasingInCacheSize)
{
    const auto p = zipf_popularity({300, 0, 1.1});
    double previous = -1.0;
    for (std::size_t m = 0; m <= 300; ++m) {
        const double delta = hit_probability(p, m);
        ASSERT_GE(delta, previous);
        ASSERT_LE(delta, 1.0);
        previous = delta;
    }
}

TEST(RequestMix, Examples)
{
    auto mix = request_mix(0.0, 0.3);
    EXPECT_DOUBLE_EQ(mix.self_offload, 0.0);
    EXPECT_DOUBLE_EQ(mix.secure_tx, 0.0);
    EXPECT_DOUBLE_EQ(mix.normal_tx_cached, 0.3);
    EXPECT_DOUBLE_EQ(mix.normal_tx_uncached, 0.7);

    mix = request_mix(1.0, 1.0);
    EXPECT_DOUBLE_EQ(mix.self_offload, 1.0);
    EXPECT_DOUBLE_EQ(mix.served(), 0.0);

    mix = request_mix(0.5, 0.3);
    EXPECT_DOUBLE_EQ(mix.self_offload, 0.15);
    EXPECT_DOUBLE_EQ(mix.secure_tx, 0.35);
    EXPECT_DOUBLE_EQ(mix.normal_tx_cached, 0.15);
    EXPECT_DOUBLE_EQ(mix.normal_tx_uncached, 0.35);
}

TEST(RequestMix, RejectsOutOfRange)
{
    EXPECT_THROW(request_mix(-0.1, 0.3), ParameterError);
    EXPECT_THROW(request_mix(0.5, 1.5), ParameterError);
    EXPECT_THROW(request_mix(std::nan(""), 0.5), ParameterError);
}

TEST(TierDensities, Examples)
{
    auto t = tier_densities(1.0, 0.0, 0.4);
    EXPECT_DOUBLE_EQ(t.lambda_b1, 0.0);
    EXPECT_DOUBLE_EQ(t.lambda_b2, 0.4);
    EXPECT_NEAR(t.lambda_b3, 0.6, 1e-15);

    t = tier_densities(1.0, 1.0, 0.5);
    EXPECT_DOUBLE_EQ(t.lambda_b1, 1.0);
    EXPECT_DOUBLE_EQ(t.lambda_b2, 0.0);
    EXPECT_DOUBLE_EQ(t.lambda_b3, 0.0);
}

TEST(TierDensities, DefaultsFromDeltaOracle)
{
    const double delta = kHead5 / kNorm100;
    const double served = 1.0 - 0.5 * delta;
    const auto t = tier_densities(1.0, 0.5, hit_probability(ContentParams{100, 5, 0.8}));
    EXPECT_NEAR(t.lambda_b1, 0.5 * (1.0 - delta) / served, 1e-14);
    EXPECT_NEAR(t.lambda_b2, 0.5 * delta / served, 1e-14);
    EXPECT_NEAR(t.lambda_b3, 0.5 * (1.0 - delta) / served, 1e-14);
}

TEST(TierDensities, DegenerateLoadRejected)
{
    EXPECT_THROW(tier_densities(1.0, 1.0, 1.0), ParameterError);
    EXPECT_THROW(tier_densities(0.0, 0.5, 0.5), ParameterError);
}

TEST(TierDensities, SharesMatchServedRequestFractions)
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> density(0.01, 50.0);
    for (int trial = 0; trial < 500; ++trial) {
        const double alpha = unit(rng);
        const double delta = unit(rng);
        const double lambda = density(rng);
        const auto t = tier_densities(lambda, alpha, delta);
        const auto mix = request_mix(alpha, delta);
        ASSERT_NEAR(mix.self_offload + mix.served(), 1.0, 1e-12);
        ASSERT_NEAR(t.total(), lambda, 1e-12 * lambda);
        ASSERT_GE(t.lambda_b3, 0.0);
        ASSERT_NEAR(mix.secure_tx / mix.served(), t.lambda_b1 / lambda, 1e-12);
        ASSERT_NEAR(mix.normal_tx_cached / mix.served(), t.lambda_b2 / lambda, 1e-12);
    }
}
