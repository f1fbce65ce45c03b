#pragma once

#include <cstdint>
#include <initializer_list>

namespace lmpivot {

/// Purpose tags used when deriving per-replication child streams.
enum class StreamPurpose : std::uint64_t {
    Data = 1,
    Weights = 2,
    Estimator = 3,
};

/// A seeded xoshiro256** stream with hash-based splitting.
///
/// Child streams are derived from (parent key, tag) by SplitMix64 mixing, so a
/// stream addressed by (master seed, experiment, replication, purpose) is the
/// same no matter which thread or in which order it is created. A single
/// stream is not thread-safe; give each worker its own.
class RngStream {
public:
    explicit RngStream(std::uint64_t key);

    /// Stream addressed by a path of tags below `master`.
    static RngStream derive(std::uint64_t master, std::initializer_list<std::uint64_t> path);

    [[nodiscard]] RngStream child(std::uint64_t tag) const;
    [[nodiscard]] RngStream child(StreamPurpose purpose) const {
        return child(static_cast<std::uint64_t>(purpose));
    }

    [[nodiscard]] std::uint64_t key() const noexcept { return key_; }

    std::uint64_t next_u64() noexcept;

    /// Uniform on the open interval (0, 1), 53-bit resolution.
    double uniform() noexcept;

    /// Uniform integer in [0, bound), unbiased. `bound` must be positive.
    std::uint64_t below(std::uint64_t bound) noexcept;

    /// Standard normal via the Marsaglia polar method.
    double normal() noexcept;

private:
    std::uint64_t key_;
    std::uint64_t s_[4];
    double spare_ = 0.0;
    bool has_spare_ = false;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

}  // namespace lmpivot
