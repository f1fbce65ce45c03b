#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "lmpivot/acvf.hpp"
#include "lmpivot/errors.hpp"
#include "lmpivot/process_gen.hpp"
#include "oracles.hpp"

using namespace lmpivot;

TEST(Acvf, SmallExamples) {
    const std::vector<double> x{1.0, 2.0, 3.0};
    EXPECT_DOUBLE_EQ(sample_mean(x), 2.0);
    EXPECT_NEAR(sample_acvf(x, 0), 2.0 / 3.0, 1e-15);
    EXPECT_NEAR(sample_acvf(x, 1), 0.0, 1e-15);
    EXPECT_NEAR(sample_acvf(x, 2), -1.0 / 3.0, 1e-15);
    const std::vector<double> c(9, 4.5);
    EXPECT_EQ(sample_acvf(c, 0), 0.0);
    EXPECT_EQ(sample_acvf(c, 3), 0.0);
}

TEST(Acvf, DomainErrors) {
    const std::vector<double> x{1.0, 2.0, 3.0};
    EXPECT_THROW(sample_acvf(x, 3), ParameterDomainError);
    EXPECT_THROW(estimate_acvf(x, 3), ParameterDomainError);
    EXPECT_THROW(sample_mean(std::vector<double>{}), ParameterDomainError);
}

TEST(Acvf, MatchesBruteForce) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const std::size_t n = 2 + seed * 4;
        const auto x = oracle::random_series(n, seed, 3.0);
        const std::size_t q = n - 1;
        const auto est = estimate_acvf(x, q);
        ASSERT_EQ(est.gammas.size(), q + 1);
        EXPECT_NEAR(est.mean, oracle::mean(x), 1e-12);
        for (std::size_t h = 0; h <= q; ++h) {
            ASSERT_NEAR(est.gammas[h], oracle::brute_acvf(x, h), 1e-12) << n << " " << h;
            ASSERT_NEAR(sample_acvf(x, h), est.gammas[h], 1e-12);
        }
    }
}

TEST(Acvf, LagZeroDominates) {
    for (std::uint64_t seed = 100; seed < 130; ++seed) {
        const auto x = oracle::random_series(64, seed);
        const auto est = estimate_acvf(x, 63);
        for (std::size_t h = 1; h <= 63; ++h) ASSERT_LE(std::abs(est.gammas[h]), est.gammas[0] + 1e-15);
    }
}

TEST(Acvf, ShiftInvariant) {
    auto x = oracle::random_series(40, 7);
    const auto a = estimate_acvf(x, 5);
    for (auto& v : x) v += 1000.0;
    const auto b = estimate_acvf(x, 5);
    for (std::size_t h = 0; h <= 5; ++h) EXPECT_NEAR(a.gammas[h], b.gammas[h], 1e-9);
}

TEST(Acvf, Ma1LagOneConverges) {
    ProcessSpec spec;
    spec.model = MA1{-0.5};
    RngStream rng(17);
    const std::size_t n = 100000;
    const auto x = simulate(spec, n, rng);
    // Bartlett: n Var = sum_k gamma_k^2 + gamma_{k+1} gamma_{k-1} = 1.5625 + 0.5 + 0.25
    const double se = std::sqrt(2.3125 / static_cast<double>(n));
    EXPECT_NEAR(sample_acvf(x, 1), -0.5, 3.0 * se);
}

TEST(Bandwidth, RuleValues) {
    EXPECT_EQ(bandwidth_q(1000, 0.0), 10u);
    EXPECT_EQ(bandwidth_q(250, 0.2), 5u);
    EXPECT_EQ(bandwidth_q(400, 0.4), 2u);
    EXPECT_EQ(bandwidth_q(30, 0.0), 4u);
    EXPECT_EQ(bandwidth_q(27, 0.0), 3u);
    // boundary d = 1/4 uses n^{1/2-d}
    EXPECT_EQ(bandwidth_q(256, 0.25), 4u);
    EXPECT_EQ(bandwidth_q(257, 0.25), 5u);
}

TEST(Bandwidth, ClampedToSqrtN) {
    for (std::size_t n = 8; n < 3000; n += 13)
        for (double d : {0.0, 0.1, 0.24, 0.25, 0.4, 0.49}) {
            const auto q = bandwidth_q(n, d);
            ASSERT_GE(q, 1u);
            ASSERT_LE(q * q, n);
        }
}

TEST(Bandwidth, DomainErrors) {
    EXPECT_THROW(bandwidth_q(7, 0.0), ParameterDomainError);
    EXPECT_THROW(bandwidth_q(100, 0.5), ParameterDomainError);
    EXPECT_THROW(bandwidth_q(100, -0.1), ParameterDomainError);
}
