#include "lmpivot/intervals.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "lmpivot/errors.hpp"
#include "lmpivot/pivots.hpp"

namespace lmpivot {

namespace {

// Acklam's rational approximation, relative error below 1.15e-9.
double acklam(double p) {
    constexpr std::array<double, 6> a{-3.969683028665376e+01, 2.209460984245205e+02,
                                      -2.759285104469687e+02, 1.383577518672690e+02,
                                      -3.066479806614716e+01, 2.506628277459239e+00};
    constexpr std::array<double, 5> b{-5.447609879822406e+01, 1.615858368580409e+02,
                                      -1.556989798598866e+02, 6.680131188771972e+01,
                                      -1.328068155288572e+01};
    constexpr std::array<double, 6> c{-7.784894002430293e-03, -3.223964580411365e-01,
                                      -2.400758277161838e+00, -2.549732539343734e+00,
                                      4.374664141464968e+00,  2.938163982698783e+00};
    constexpr std::array<double, 4> e{7.784695709041462e-03, 3.224671290700398e-01,
                                      2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((e[0] * q + e[1]) * q + e[2]) * q + e[3]) * q + 1.0);
    }
    if (p > 1.0 - p_low) return -acklam(1.0 - p);
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

struct Numerator {
    double abs_weighted_sum;  // sum |c_i| X_i
    double abs_weight_total;  // sum |c_j|
    double root_d;            // D^{1/2}
};

Numerator numerator_parts(std::span<const double> x, const WeightVector& w, std::size_t q,
                          double d) {
    if (w.is_degenerate()) throw DegenerateWeights();
    const auto vc = variance_components(x, w, q, d);
    if (!(vc.total > 0.0) || !std::isfinite(vc.total))
        throw NonpositiveStudentizer("nonpositive studentizer in confidence interval");
    return {randomized_abs_sum(x, w, 0.0), sum_abs_centered(w), std::sqrt(vc.total)};
}

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterDomainError("alpha must lie in (0, 1)");
}

}  // namespace

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double z_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw ParameterDomainError("quantile level must lie in (0, 1)");
    if (p == 0.5) return 0.0;
    // upper half by symmetry so z(p) = -z(1-p) holds exactly
    if (p > 0.5) return -z_quantile(1.0 - p);
    double z = acklam(p);
    // one Halley step against the erfc-based CDF
    const double err = normal_cdf(z) - p;
    const double u = err * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * z * z);
    z -= u / (1.0 + 0.5 * z * u);
    return z;
}

Interval ci_mean(std::span<const double> x, const WeightVector& w, std::size_t q, double d,
                 double alpha) {
    check_alpha(alpha);
    const auto parts = numerator_parts(x, w, q, d);
    const double z = alpha >= 1.0 ? 0.0 : z_quantile(1.0 - alpha / 2.0);
    const double center = parts.abs_weighted_sum / parts.abs_weight_total;
    const double half = z * parts.root_d / parts.abs_weight_total;
    return {center - half, center + half, 1.0 - alpha,
            d > 0.0 ? IntervalMethod::GStuLong : IntervalMethod::GStuShort};
}

double one_sided_mean_bound(std::span<const double> x, const WeightVector& w, std::size_t q,
                            double d, double alpha, bool lower) {
    check_alpha(alpha);
    const auto parts = numerator_parts(x, w, q, d);
    const double z = z_quantile(1.0 - alpha);
    const double shift = lower ? -z * parts.root_d : z * parts.root_d;
    return (parts.abs_weighted_sum + shift) / parts.abs_weight_total;
}

double functional_lower_bound(std::span<const double> x, const WeightVector& w, std::size_t q,
                              double d, double alpha, const FunctionalBoundRequest& req) {
    if (!req.func) throw ParameterDomainError("functional bound requires a callable");
    const bool increasing = req.shape == FunctionalShape::IncreasingConvex;
    return req.func(one_sided_mean_bound(x, w, q, d, alpha, increasing));
}

}  // namespace lmpivot
