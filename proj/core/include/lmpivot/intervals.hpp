#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include "lmpivot/rand_weights.hpp"

namespace lmpivot {

enum class IntervalMethod {
    GStuShort,  ///< D_{n,q,0}
    GStuLong,   ///< D_{n,q,d}, d > 0
};

struct Interval {
    double lower = 0.0;
    double upper = 0.0;
    double level = 0.95;
    IntervalMethod method = IntervalMethod::GStuShort;

    [[nodiscard]] double midpoint() const noexcept { return 0.5 * (lower + upper); }
    [[nodiscard]] double halfwidth() const noexcept { return 0.5 * (upper - lower); }
    [[nodiscard]] bool contains(double v) const noexcept { return lower <= v && v <= upper; }
};

enum class FunctionalShape { IncreasingConvex, DecreasingConvex };

/// Shape is declared by the caller and not verified.
struct FunctionalBoundRequest {
    std::function<double(double)> func;
    FunctionalShape shape = FunctionalShape::IncreasingConvex;
};

/// Standard normal quantile, accurate to about 1e-15. Requires 0 < p < 1.
double z_quantile(double p);

/// Standard normal CDF.
double normal_cdf(double x);

/// Two-sided 1-alpha interval for the mean:
///   (sum |c_i| X_i -+ z_{1-alpha/2} D^{1/2}) / sum |c_j|.
Interval ci_mean(std::span<const double> x, const WeightVector& w, std::size_t q, double d,
                 double alpha);

/// One-sided 1-alpha bound point for the mean using z_{1-alpha}: the lower bound
/// when `lower` is true, else the upper bound.
double one_sided_mean_bound(std::span<const double> x, const WeightVector& w, std::size_t q,
                            double d, double alpha, bool lower);

/// 1-alpha lower confidence bound for E G(X): G applied to the one-sided lower mean
/// bound for increasing convex G, to the one-sided upper bound for decreasing convex G.
double functional_lower_bound(std::span<const double> x, const WeightVector& w, std::size_t q,
                              double d, double alpha, const FunctionalBoundRequest& req);

}  // namespace lmpivot
