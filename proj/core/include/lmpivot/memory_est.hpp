#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace lmpivot {

struct MemoryEstimate {
    double d_hat = 0.0;  ///< in [0, 0.499]
    std::size_t m = 0;   ///< low frequencies used
};

inline constexpr double kMaxMemoryParameter = 0.499;

/// I(lambda_j) = |sum_t X_t e^{-i t lambda_j}|^2 / (2 pi n) at lambda_j = 2 pi j / n,
/// j = 1..floor((n-1)/2). Element j-1 holds frequency j. Requires n >= 8.
std::vector<double> periodogram(std::span<const double> x);

/// round(n^0.65)
std::size_t default_whittle_bandwidth(std::size_t n);

/// Local Whittle objective
///   R(d) = log( (1/m) sum_{j<=m} lambda_j^{2d} I_j ) - (2d/m) sum_{j<=m} log lambda_j
/// for a periodogram `pgram` of a length-n series.
double local_whittle_objective(std::span<const double> pgram, std::size_t n, std::size_t m,
                               double d);

/// Golden-section minimizer of R over [0, 0.499], absolute tolerance 1e-6.
/// Requires 8 <= m <= floor((n-1)/2).
MemoryEstimate local_whittle(std::span<const double> x, std::size_t m);

}  // namespace lmpivot
