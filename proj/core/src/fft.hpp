#pragma once

// FFTW-backed helpers. Plans are created under a global mutex with FFTW_ESTIMATE
// and executed through the new-array interface on fftw_malloc'd buffers, which is
// thread-safe and gives results independent of the calling thread.

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace lmpivot::detail {

/// Smallest size >= n whose only prime factors are 2, 3, 5, 7.
std::size_t good_fft_size(std::size_t n);

/// Real forward transform of a fixed length (zero-padded input).
class RealFft {
public:
    explicit RealFft(std::size_t size);
    ~RealFft();
    RealFft(const RealFft&) = delete;
    RealFft& operator=(const RealFft&) = delete;

    [[nodiscard]] std::size_t size() const noexcept { return size_; }

    /// Spectrum bins 0..size/2 of `input` zero-padded to size().
    [[nodiscard]] std::vector<std::complex<double>> forward(std::span<const double> input) const;

    /// Unnormalized inverse of a half spectrum (size/2 + 1 bins); output length size().
    [[nodiscard]] std::vector<double> inverse(std::span<const std::complex<double>> spectrum) const;

private:
    struct Plans;
    std::size_t size_;
    std::unique_ptr<Plans> plans_;
};

/// Computes the valid part of a causal linear filter
///   y_t = sum_{k=0}^{K} kernel_k * signal_{t+K-k},  t = 0..out_len-1,
/// for signals of length K + out_len, by circular convolution.
class CausalConvolver {
public:
    CausalConvolver(std::span<const double> kernel, std::size_t out_len);

    [[nodiscard]] std::vector<double> apply(std::span<const double> signal) const;

    [[nodiscard]] std::size_t signal_length() const noexcept { return kernel_len_ - 1 + out_len_; }

private:
    std::size_t kernel_len_;
    std::size_t out_len_;
    RealFft fft_;
    std::vector<std::complex<double>> kernel_hat_;
};

/// r_h = sum_{j} a_j a_{j+h} for h = 0..a.size()-1.
std::vector<double> lagged_products(std::span<const double> a);

}  // namespace lmpivot::detail
