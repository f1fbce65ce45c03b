#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "lmpivot/process_gen.hpp"
#include "lmpivot/rand_weights.hpp"
#include "lmpivot/rng.hpp"

namespace lmpivot {

enum class PivotKind {
    Gn,          ///< randomized pivot with theoretical autocovariances
    GnStu,       ///< studentized randomized pivot G_n^stu(d)
    TnStu,       ///< classical studentized mean T_n^stu(d)
    TStar,       ///< bootstrap mean difference, full conditional variance
    TStarShort,  ///< bootstrap mean difference, lag-0 variance only
    TStarStu,    ///< bootstrap mean difference studentized by the sample variance
};

std::string_view pivot_name(PivotKind kind);

struct PivotValue {
    double value = 0.0;
    PivotKind kind = PivotKind::GnStu;
};

/// D_{n,q,d} and its two additive parts.
struct VarianceComponents {
    double lag0_term = 0.0;   ///< (q/n)^{-2d} gamma_0 sum_j (w_j/n - 1/n)^2
    double cross_term = 0.0;  ///< 2 sum_h gamma_h sum_{j<=q-h} |w_j-1||w_{j+h}-1| / (n^{1-2d} q^{1+2d})
    double total = 0.0;
    double d_used = 0.0;
    std::size_t q_used = 0;
};

/// sum_i |w_i/n - 1/n| (X_i - mu)
double randomized_abs_sum(std::span<const double> x, const WeightVector& w, double mu);

/// sum_i (w_i/n - 1/n) X_i, which equals the bootstrap mean minus the sample mean.
double randomized_signed_sum(std::span<const double> x, const WeightVector& w);

/// G_n with theoretical autocovariances gamma[0..n-1] (missing tail lags count as zero).
PivotValue g_n(std::span<const double> x, const WeightVector& w, double mu,
               std::span<const double> gamma);

VarianceComponents variance_components(std::span<const double> x, const WeightVector& w,
                                       std::size_t q, double d);

/// randomized_abs_sum / sqrt(D_{n,q,d})
PivotValue g_n_stu(std::span<const double> x, const WeightVector& w, std::size_t q, double d,
                   double mu);

/// n^{1/2-d} (mean - mu) / sqrt(q^{-2d} gamma_0 + 2 q^{-2d} sum_{h<=q} gamma_h (1 - h/q))
PivotValue t_n_stu(std::span<const double> x, std::size_t q, double d, double mu);

/// Bootstrap statistic with the full conditional variance built from gamma[0..n-1].
PivotValue t_star(std::span<const double> x, const WeightVector& w,
                  std::span<const double> gamma);

/// Bootstrap statistic with the lag-0 term only.
PivotValue t_star_short(std::span<const double> x, const WeightVector& w, double gamma0);

/// Bootstrap statistic studentized by the sample lag-0 autocovariance.
PivotValue t_star_stu(std::span<const double> x, const WeightVector& w);

/// gamma_0 sum c_j^2 + 2 sum_{h>=1} gamma_h sum_j c_j c_{j+h} for c_j = w_j/n - 1/n,
/// i.e. the conditional variance of the bootstrap mean difference given the weights.
double conditional_signed_variance(const WeightVector& w, std::span<const double> gamma);

/// Same with |c_j| in place of c_j: the conditional variance of randomized_abs_sum.
double conditional_abs_variance(const WeightVector& w, std::span<const double> gamma);

/// Average over `reps` weight draws of n^{1-2d} conditional_signed_variance, with the
/// theoretical autocovariances of `spec`. Tends to zero for long memory, to gamma_0 for
/// short memory.
double tstar_variance_diagnostic(const ProcessSpec& spec, std::size_t n, std::size_t reps,
                                 RngStream& rng);

}  // namespace lmpivot
