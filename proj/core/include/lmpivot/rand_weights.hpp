#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "lmpivot/rng.hpp"

namespace lmpivot {

/// Multinomial(n; 1/n, ..., 1/n) counts. Always sums to n.
class WeightVector {
public:
    /// Throws ParameterDomainError unless the counts sum to their length.
    explicit WeightVector(std::vector<std::uint32_t> counts);

    /// Multiplicities of 0-based indices drawn with replacement from {0..n-1}.
    static WeightVector from_indices(std::size_t n, std::span<const std::size_t> indices);

    [[nodiscard]] std::size_t n() const noexcept { return counts_.size(); }
    [[nodiscard]] std::span<const std::uint32_t> counts() const noexcept { return counts_; }
    [[nodiscard]] std::uint32_t operator[](std::size_t i) const noexcept { return counts_[i]; }

    /// True for the all-ones vector (all centered weights vanish).
    [[nodiscard]] bool is_degenerate() const noexcept;

    /// |w_i - 1|
    [[nodiscard]] double abs_deviation(std::size_t i) const noexcept {
        return counts_[i] >= 1 ? static_cast<double>(counts_[i] - 1) : 1.0;
    }
    /// w_i - 1
    [[nodiscard]] double deviation(std::size_t i) const noexcept {
        return static_cast<double>(counts_[i]) - 1.0;
    }

private:
    std::vector<std::uint32_t> counts_;
};

/// n categorical index draws; n >= 2.
WeightVector draw_weights(std::size_t n, RngStream& rng);

/// sum_j (w_j/n - 1/n)^2
double sum_sq_centered(const WeightVector& w);

/// sum_j |w_j/n - 1/n|
double sum_abs_centered(const WeightVector& w);

/// sum_{j=1}^{upper-h} |w_j - 1| |w_{j+h} - 1|, 1-based j, unnormalized.
/// Returns 0 when h >= upper. Requires h >= 1 and upper <= n.
double abs_lag_product_sum(const WeightVector& w, std::size_t h, std::size_t upper);

struct CenteredWeightStats {
    double sum_sq = 0.0;
    /// lag h -> abs_lag_product_sum(w, h, upper)
    std::map<std::size_t, double> abs_lag_sums;
    std::size_t upper = 0;
};

/// sum_sq plus abs_lag_sums for h = 1..upper-1 over j <= upper - h.
CenteredWeightStats centered_weight_stats(const WeightVector& w, std::size_t upper);

/// E|(w_1 - 1)(w_2 - 1)| in closed form:
///   -1/n + 4 (1 - 1/n)^n [ 1/(n-1) + (1 - 1/(n-1))^n ].
double exact_abs_cross_moment(std::size_t n);

/// The asymptotic form that drops the 1/(n-1) term:
///   -1/n + 4 (1 - 1/n)^n (1 - 1/(n-1))^n.
double asymptotic_abs_cross_moment(std::size_t n);

/// b_{n,h} = -(n-h)/n^2 + 4 (n-h)/n (1 - 1/n)^n (1 - 1/(n-1))^n, 1 <= h <= n-1.
double lag_block_moment(std::size_t n, std::size_t h);

}  // namespace lmpivot
