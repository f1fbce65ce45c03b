#include "fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <mutex>

namespace lmpivot::detail {

namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwDeleter {
    void operator()(void* p) const noexcept { fftw_free(p); }
};

template <class T>
using FftwBuffer = std::unique_ptr<T[], FftwDeleter>;

template <class T>
FftwBuffer<T> allocate(std::size_t count) {
    return FftwBuffer<T>(static_cast<T*>(fftw_malloc(sizeof(T) * std::max<std::size_t>(count, 1))));
}

}  // namespace

std::size_t good_fft_size(std::size_t n) {
    if (n <= 1) return 1;
    for (std::size_t m = n;; ++m) {
        std::size_t r = m;
        for (std::size_t p : {2u, 3u, 5u, 7u})
            while (r % p == 0) r /= p;
        if (r == 1) return m;
    }
}

struct RealFft::Plans {
    fftw_plan forward = nullptr;
    fftw_plan inverse = nullptr;
    ~Plans() {
        std::lock_guard lock(planner_mutex());
        if (forward) fftw_destroy_plan(forward);
        if (inverse) fftw_destroy_plan(inverse);
    }
};

RealFft::RealFft(std::size_t size) : size_(size), plans_(std::make_unique<Plans>()) {
    auto real = allocate<double>(size_);
    auto spec = allocate<fftw_complex>(size_ / 2 + 1);
    const int n = static_cast<int>(size_);
    std::lock_guard lock(planner_mutex());
    plans_->forward = fftw_plan_dft_r2c_1d(n, real.get(), spec.get(), FFTW_ESTIMATE);
    plans_->inverse = fftw_plan_dft_c2r_1d(n, spec.get(), real.get(), FFTW_ESTIMATE);
}

RealFft::~RealFft() = default;

std::vector<std::complex<double>> RealFft::forward(std::span<const double> input) const {
    auto real = allocate<double>(size_);
    auto spec = allocate<fftw_complex>(size_ / 2 + 1);
    const std::size_t len = std::min(input.size(), size_);
    std::copy_n(input.begin(), len, real.get());
    std::fill(real.get() + len, real.get() + size_, 0.0);
    fftw_execute_dft_r2c(plans_->forward, real.get(), spec.get());
    std::vector<std::complex<double>> out(size_ / 2 + 1);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = {spec[k][0], spec[k][1]};
    return out;
}

std::vector<double> RealFft::inverse(std::span<const std::complex<double>> spectrum) const {
    auto real = allocate<double>(size_);
    auto spec = allocate<fftw_complex>(size_ / 2 + 1);
    for (std::size_t k = 0; k < size_ / 2 + 1; ++k) {
        spec[k][0] = spectrum[k].real();
        spec[k][1] = spectrum[k].imag();
    }
    // c2r destroys its input; spec is a private copy
    fftw_execute_dft_c2r(plans_->inverse, spec.get(), real.get());
    return std::vector<double>(real.get(), real.get() + size_);
}

CausalConvolver::CausalConvolver(std::span<const double> kernel, std::size_t out_len)
    : kernel_len_(kernel.size()),
      out_len_(out_len),
      fft_(good_fft_size(kernel.size() - 1 + out_len)),
      kernel_hat_(fft_.forward(kernel)) {}

std::vector<double> CausalConvolver::apply(std::span<const double> signal) const {
    auto hat = fft_.forward(signal.first(std::min(signal.size(), signal_length())));
    for (std::size_t k = 0; k < hat.size(); ++k) hat[k] *= kernel_hat_[k];
    const auto full = fft_.inverse(hat);
    const double scale = 1.0 / static_cast<double>(fft_.size());
    std::vector<double> out(out_len_);
    const std::size_t offset = kernel_len_ - 1;
    for (std::size_t t = 0; t < out_len_; ++t) out[t] = full[offset + t] * scale;
    return out;
}

std::vector<double> lagged_products(std::span<const double> a) {
    const std::size_t n = a.size();
    std::vector<double> r(n, 0.0);
    if (n <= 256) {
        for (std::size_t h = 0; h < n; ++h) {
            double s = 0.0;
            for (std::size_t j = 0; j + h < n; ++j) s += a[j] * a[j + h];
            r[h] = s;
        }
        return r;
    }
    RealFft fft(good_fft_size(2 * n));
    auto hat = fft.forward(a);
    for (auto& z : hat) z = std::norm(z);
    const auto full = fft.inverse(hat);
    const double scale = 1.0 / static_cast<double>(fft.size());
    for (std::size_t h = 0; h < n; ++h) r[h] = full[h] * scale;
    return r;
}

}  // namespace lmpivot::detail
