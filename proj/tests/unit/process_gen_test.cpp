#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "lmpivot/errors.hpp"
#include "lmpivot/process_gen.hpp"
#include "oracles.hpp"

using namespace lmpivot;

namespace {

ProcessSpec spec_of(ProcessModel m, double mu = 0.0,
                    InnovationKind k = InnovationKind::GaussianStd) {
    ProcessSpec s;
    s.model = m;
    s.mu = mu;
    s.innovations = k;
    return s;
}

double sample_var(const std::vector<double>& x) {
    const double m = oracle::mean(x);
    double s = 0.0;
    for (double v : x) s += (v - m) * (v - m);
    return s / static_cast<double>(x.size());
}

}  // namespace

TEST(ProcessGen, ZeroInnovationsGiveConstantMean) {
    const auto spec = spec_of(MA1{-0.5}, 3.25);
    const std::size_t n = 10;
    std::vector<double> zeros(presample_length(spec, n) + n, 0.0);
    for (double v : filter_innovations(spec, n, zeros)) EXPECT_EQ(v, 3.25);
}

TEST(ProcessGen, Ar1HandIteration) {
    auto spec = spec_of(AR1{0.5});
    std::vector<double> e(spec.burnin, 0.0);
    e.insert(e.end(), {1.0, 0.0, 0.0});
    const auto x = filter_innovations(spec, 3, e);
    ASSERT_EQ(x.size(), 3u);
    EXPECT_DOUBLE_EQ(x[0], 1.0);
    EXPECT_DOUBLE_EQ(x[1], 0.5);
    EXPECT_DOUBLE_EQ(x[2], 0.25);
}

TEST(ProcessGen, Ma1UsesPreviousInnovation) {
    const auto spec = spec_of(MA1{-0.5}, 1.0);
    const auto x = filter_innovations(spec, 2, std::vector<double>{2.0, 1.0, 0.0});
    EXPECT_DOUBLE_EQ(x[0], 1.0 + 1.0 - 0.5 * 2.0);
    EXPECT_DOUBLE_EQ(x[1], 1.0 + 0.0 - 0.5 * 1.0);
}

TEST(ProcessGen, FilterRejectsWrongInnovationCount) {
    const auto spec = spec_of(MA1{0.3});
    EXPECT_THROW(filter_innovations(spec, 5, std::vector<double>(5, 0.0)), ShapeError);
}

TEST(ProcessGen, FarimaCoefficientsByHand) {
    EXPECT_EQ(farima_ma_coeffs(0.2, 0), std::vector<double>{1.0});
    const auto psi = farima_ma_coeffs(0.2, 3);
    ASSERT_EQ(psi.size(), 4u);
    EXPECT_DOUBLE_EQ(psi[0], 1.0);
    EXPECT_NEAR(psi[1], 0.2, 1e-15);
    EXPECT_NEAR(psi[2], 0.12, 1e-15);
    EXPECT_NEAR(psi[3], 0.088, 1e-15);
}

TEST(ProcessGen, FarimaCoefficientsMatchGammaRatios) {
    for (double d : {0.05, 0.2, 0.35, 0.49}) {
        const auto psi = farima_ma_coeffs(d, 2000);
        for (std::size_t k : {1u, 2u, 10u, 100u, 1999u, 2000u})
            EXPECT_NEAR(psi[k] / oracle::farima_psi_gamma(d, k), 1.0, 1e-10) << "d=" << d << " k=" << k;
    }
}

TEST(ProcessGen, FarimaCoefficientTailFollowsPowerLaw) {
    const double d = 0.2;
    const std::size_t k = 10000;
    const auto psi = farima_ma_coeffs(d, k);
    const double stirling = std::pow(static_cast<double>(k), d - 1.0) / std::tgamma(d);
    EXPECT_NEAR(psi[k] / stirling, 1.0, 0.01);
}

TEST(ProcessGen, FarimaCoefficientsPositiveAndDecreasing) {
    for (double d = 0.01; d < 0.5; d += 0.04) {
        const auto psi = farima_ma_coeffs(d, 500);
        for (std::size_t k = 1; k < psi.size(); ++k) {
            ASSERT_GT(psi[k], 0.0);
            if (k >= 2) ASSERT_LT(psi[k], psi[k - 1]) << "d=" << d << " k=" << k;
        }
    }
}

TEST(ProcessGen, FarimaDomainErrors) {
    EXPECT_THROW(farima_ma_coeffs(0.0, 3), ParameterDomainError);
    EXPECT_THROW(farima_ma_coeffs(0.5, 3), ParameterDomainError);
    EXPECT_THROW(validate(spec_of(Farima{0.6})), ParameterDomainError);
    EXPECT_THROW(validate(spec_of(AR1{1.0})), ParameterDomainError);
    EXPECT_THROW(validate(spec_of(AR1{-1.2})), ParameterDomainError);
    RngStream rng(1);
    EXPECT_THROW(simulate(spec_of(MA1{0.1}), 1, rng), ParameterDomainError);
}

TEST(ProcessGen, TheoreticalAcvfClosedForms) {
    EXPECT_DOUBLE_EQ(theoretical_acvf(spec_of(MA1{-0.5}), 0), 1.25);
    EXPECT_DOUBLE_EQ(theoretical_acvf(spec_of(MA1{-0.5}), 1), -0.5);
    EXPECT_EQ(theoretical_acvf(spec_of(MA1{-0.5}), 5), 0.0);
    EXPECT_NEAR(theoretical_acvf(spec_of(AR1{0.5}), 0), 4.0 / 3.0, 1e-15);
    EXPECT_NEAR(theoretical_acvf(spec_of(AR1{0.5}), 3), 0.125 * 4.0 / 3.0, 1e-15);
}

TEST(ProcessGen, ShortMemoryAcvfEqualsCoefficientConvolution) {
    // MA(1): a = (1, theta); AR(1): a_k = phi^k
    const double theta = 0.7;
    for (std::size_t h = 0; h < 4; ++h) {
        const double conv = h == 0 ? 1 + theta * theta : (h == 1 ? theta : 0.0);
        EXPECT_NEAR(theoretical_acvf(spec_of(MA1{theta}), h), conv, 1e-15);
    }
    const double phi = -0.6;
    for (std::size_t h = 0; h < 6; ++h) {
        double conv = 0.0;
        for (std::size_t k = 0; k < 400; ++k) conv += std::pow(phi, k) * std::pow(phi, k + h);
        EXPECT_NEAR(theoretical_acvf(spec_of(AR1{phi}), h), conv, 1e-12);
    }
}

TEST(ProcessGen, FarimaAcvfEqualsTruncatedConvolution) {
    const std::size_t K = 100000;
    for (double d : {0.1, 0.2}) {
        const auto psi = farima_ma_coeffs(d, K + 50);
        for (std::size_t h : {0u, 1u, 5u, 20u, 50u}) {
            double conv = 0.0;
            for (std::size_t k = 0; k <= K; ++k) conv += psi[k] * psi[k + h];
            const double exact = theoretical_acvf(spec_of(Farima{d}), h);
            EXPECT_NEAR(conv / exact, 1.0, 0.005) << "d=" << d << " h=" << h;
        }
    }
}

TEST(ProcessGen, FarimaAcvfTruncationErrorShrinksWithK) {
    const double d = 0.3;
    const double exact = theoretical_acvf(spec_of(Farima{d}), 2);
    double prev_gap = 1e9;
    for (std::size_t K : {100u, 1000u, 10000u}) {
        const auto psi = farima_ma_coeffs(d, K + 2);
        double conv = 0.0;
        for (std::size_t k = 0; k <= K; ++k) conv += psi[k] * psi[k + 2];
        const double gap = exact - conv;
        EXPECT_GT(gap, 0.0);
        EXPECT_LT(gap, prev_gap);
        prev_gap = gap;
    }
}

TEST(ProcessGen, AcvfSequenceMatchesPointwise) {
    for (const auto& spec : {spec_of(Farima{0.35}), spec_of(AR1{0.4}), spec_of(MA1{0.2})}) {
        const auto seq = theoretical_acvf_seq(spec, 300);
        for (std::size_t h : {0u, 1u, 2u, 17u, 299u})
            EXPECT_NEAR(seq[h], theoretical_acvf(spec, h), 1e-12 * std::abs(seq[0]));
    }
}

TEST(ProcessGen, FftSimulatorMatchesDirectFilter) {
    auto spec = spec_of(Farima{0.3}, 2.0);
    spec.truncation_K = 300;
    const std::size_t n = 57;
    RngStream rng(77);
    RngStream replay = rng;
    const auto x = Simulator(spec, n)(rng);
    std::vector<double> e(presample_length(spec, n) + n);
    for (auto& v : e) v = draw_innovation(spec.innovations, replay);
    const auto direct = filter_innovations(spec, n, e);
    ASSERT_EQ(x.size(), n);
    for (std::size_t t = 0; t < n; ++t) EXPECT_NEAR(x[t], direct[t], 1e-10);
}

TEST(ProcessGen, FarimaSampleVarianceMatchesTheory) {
    auto spec = spec_of(Farima{0.2});
    spec.truncation_K = 10000;
    RngStream rng(2024);
    const auto x = simulate(spec, 100000, rng);
    EXPECT_NEAR(sample_var(x) / theoretical_acvf(spec, 0), 1.0, 0.05);
}

TEST(ProcessGen, ShortMemoryMeanWithinFourStandardErrors) {
    const std::size_t n = 1000000;
    {
        const auto spec = spec_of(MA1{-0.5}, 5.0);
        RngStream rng(31);
        const auto x = simulate(spec, n, rng);
        // long-run variance (1 + theta)^2
        EXPECT_NEAR(oracle::mean(x), 5.0, 4.0 * std::sqrt(0.25 / n));
    }
    {
        const auto spec = spec_of(AR1{0.5}, -1.0, InnovationKind::LognormalStd);
        RngStream rng(32);
        const auto x = simulate(spec, n, rng);
        // long-run variance 1 / (1 - phi)^2
        EXPECT_NEAR(oracle::mean(x), -1.0, 4.0 * std::sqrt(4.0 / n));
    }
}

TEST(ProcessGen, StandardizedInnovationMoments) {
    constexpr std::size_t N = 1000000;
    for (auto kind : {InnovationKind::GaussianStd, InnovationKind::LognormalStd}) {
        RngStream rng(kind == InnovationKind::GaussianStd ? 3 : 4);
        std::vector<double> e(N);
        for (auto& v : e) v = draw_innovation(kind, rng);
        EXPECT_LT(std::abs(oracle::mean(e)), 4.0 / std::sqrt(static_cast<double>(N)));
        EXPECT_NEAR(sample_var(e), 1.0, 0.05);
    }
}

TEST(ProcessGen, LognormalInnovationsAreRightSkewed) {
    RngStream rng(8);
    double s3 = 0.0;
    const int N = 200000;
    for (int i = 0; i < N; ++i) {
        const double v = draw_innovation(InnovationKind::LognormalStd, rng);
        s3 += v * v * v;
        ASSERT_GT(v, -std::exp(0.5) / std::sqrt(std::exp(1.0) * (std::exp(1.0) - 1.0)));
    }
    EXPECT_GT(s3 / N, 3.0);  // population skewness is about 6.18
}

TEST(ProcessGen, SimulateIsDeterministicPerStream) {
    const auto spec = spec_of(Farima{0.4}, 0.0, InnovationKind::LognormalStd);
    RngStream a(99), b(99);
    EXPECT_EQ(simulate(spec, 40, a), simulate(spec, 40, b));
}

TEST(ProcessGen, DefaultTruncation) {
    EXPECT_EQ(default_truncation(20), 10000u);
    EXPECT_EQ(default_truncation(400), 20000u);
    EXPECT_EQ(presample_length(spec_of(Farima{0.2}), 400), 20000u);
}
