#include "lmpivot/rand_weights.hpp"

#include <cassert>
#include <cmath>
#include <numeric>

#include "lmpivot/errors.hpp"

namespace lmpivot {

WeightVector::WeightVector(std::vector<std::uint32_t> counts) : counts_(std::move(counts)) {
    const auto total = std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
    if (counts_.empty() || total != counts_.size())
        throw ParameterDomainError("weight counts must sum to their length n");
}

WeightVector WeightVector::from_indices(std::size_t n, std::span<const std::size_t> indices) {
    if (indices.size() != n) throw ShapeError("expected exactly n index draws");
    std::vector<std::uint32_t> counts(n, 0);
    for (auto i : indices) {
        if (i >= n) throw ParameterDomainError("index draw out of range");
        ++counts[i];
    }
    return WeightVector(std::move(counts));
}

bool WeightVector::is_degenerate() const noexcept {
    for (auto c : counts_)
        if (c != 1) return false;
    return true;
}

WeightVector draw_weights(std::size_t n, RngStream& rng) {
    if (n < 2) throw ParameterDomainError("draw_weights requires n >= 2");
    std::vector<std::uint32_t> counts(n, 0);
    for (std::size_t k = 0; k < n; ++k) ++counts[rng.below(n)];
    WeightVector w(std::move(counts));
    assert(w.n() == n);
    return w;
}

double sum_sq_centered(const WeightVector& w) {
    const auto n = static_cast<double>(w.n());
    double s = 0.0;
    for (std::size_t j = 0; j < w.n(); ++j) {
        const double dev = w.deviation(j);
        s += dev * dev;
    }
    return s / (n * n);
}

double sum_abs_centered(const WeightVector& w) {
    double s = 0.0;
    for (std::size_t j = 0; j < w.n(); ++j) s += w.abs_deviation(j);
    return s / static_cast<double>(w.n());
}

double abs_lag_product_sum(const WeightVector& w, std::size_t h, std::size_t upper) {
    if (h == 0) throw ParameterDomainError("lag h must be >= 1");
    if (upper > w.n()) throw ParameterDomainError("upper must not exceed n");
    if (h >= upper) return 0.0;
    double s = 0.0;
    for (std::size_t j = 0; j + h < upper; ++j) s += w.abs_deviation(j) * w.abs_deviation(j + h);
    return s;
}

CenteredWeightStats centered_weight_stats(const WeightVector& w, std::size_t upper) {
    CenteredWeightStats stats;
    stats.sum_sq = sum_sq_centered(w);
    stats.upper = upper;
    for (std::size_t h = 1; h < upper; ++h) stats.abs_lag_sums[h] = abs_lag_product_sum(w, h, upper);
    return stats;
}

double exact_abs_cross_moment(std::size_t n) {
    if (n < 2) throw ParameterDomainError("exact_abs_cross_moment requires n >= 2");
    const auto nd = static_cast<double>(n);
    const double p0 = std::pow(1.0 - 1.0 / nd, nd);
    const double tail = n == 2 ? 0.0 : std::pow(1.0 - 1.0 / (nd - 1.0), nd);
    return -1.0 / nd + 4.0 * p0 * (1.0 / (nd - 1.0) + tail);
}

double asymptotic_abs_cross_moment(std::size_t n) {
    if (n < 2) throw ParameterDomainError("asymptotic_abs_cross_moment requires n >= 2");
    const auto nd = static_cast<double>(n);
    const double tail = n == 2 ? 0.0 : std::pow(1.0 - 1.0 / (nd - 1.0), nd);
    return -1.0 / nd + 4.0 * std::pow(1.0 - 1.0 / nd, nd) * tail;
}

double lag_block_moment(std::size_t n, std::size_t h) {
    if (n < 2 || h < 1 || h > n - 1) throw ParameterDomainError("lag_block_moment requires 1 <= h <= n-1");
    const auto nd = static_cast<double>(n);
    const auto rem = static_cast<double>(n - h);
    const double tail = n == 2 ? 0.0 : std::pow(1.0 - 1.0 / (nd - 1.0), nd);
    return -rem / (nd * nd) + 4.0 * rem / nd * std::pow(1.0 - 1.0 / nd, nd) * tail;
}

}  // namespace lmpivot
