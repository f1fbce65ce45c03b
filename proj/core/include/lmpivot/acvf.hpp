#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace lmpivot {

/// Sample mean and n-divisor autocovariances at lags 0..q.
struct AcvfEstimates {
    double mean = 0.0;
    std::vector<double> gammas;
    std::size_t n = 0;
    std::size_t q = 0;
};

double sample_mean(std::span<const double> x);

/// (1/n) sum_{j=1}^{n-h} (X_j - mean)(X_{j+h} - mean); requires h < n.
double sample_acvf(std::span<const double> x, std::size_t h);

/// All lags 0..q in one pass over the centered series; requires q < n.
AcvfEstimates estimate_acvf(std::span<const double> x, std::size_t q);

/// Bandwidth rule for the studentizers:
///   d = 0          ceil(n^{1/3})
///   0 < d < 1/4    ceil(n^{1/(3+4d)})
///   1/4 <= d < 1/2 ceil(n^{1/2-d})
/// clamped to [1, floor(sqrt(n))]. Requires n >= 8.
std::size_t bandwidth_q(std::size_t n, double d);

}  // namespace lmpivot
