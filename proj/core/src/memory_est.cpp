#include "lmpivot/memory_est.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fft.hpp"
#include "lmpivot/errors.hpp"

namespace lmpivot {

std::vector<double> periodogram(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n < 8) throw ParameterDomainError("periodogram requires n >= 8");
    detail::RealFft fft(n);
    const auto hat = fft.forward(x);
    const std::size_t count = (n - 1) / 2;
    const double norm = 2.0 * std::numbers::pi * static_cast<double>(n);
    std::vector<double> pgram(count);
    for (std::size_t j = 1; j <= count; ++j) pgram[j - 1] = std::norm(hat[j]) / norm;
    return pgram;
}

std::size_t default_whittle_bandwidth(std::size_t n) {
    return static_cast<std::size_t>(std::llround(std::pow(static_cast<double>(n), 0.65)));
}

double local_whittle_objective(std::span<const double> pgram, std::size_t n, std::size_t m,
                               double d) {
    if (m == 0 || m > pgram.size()) throw ParameterDomainError("m out of range for periodogram");
    const double step = 2.0 * std::numbers::pi / static_cast<double>(n);
    double weighted = 0.0;
    double log_lambda = 0.0;
    for (std::size_t j = 1; j <= m; ++j) {
        const double log_l = std::log(static_cast<double>(j) * step);
        weighted += std::exp(2.0 * d * log_l) * pgram[j - 1];
        log_lambda += log_l;
    }
    const auto md = static_cast<double>(m);
    return std::log(weighted / md) - 2.0 * d * log_lambda / md;
}

MemoryEstimate local_whittle(std::span<const double> x, std::size_t m) {
    const std::size_t n = x.size();
    if (n < 8 || m < 8 || m > (n - 1) / 2)
        throw ParameterDomainError("local_whittle requires 8 <= m <= floor((n-1)/2)");
    const auto pgram = periodogram(x);
    for (std::size_t j = 0; j < m; ++j)
        if (!std::isfinite(pgram[j])) throw NumericError("non-finite periodogram ordinate");

    auto objective = [&](double d) {
        const double r = local_whittle_objective(pgram, n, m, d);
        if (!std::isfinite(r)) throw NumericError("local Whittle objective is not finite");
        return r;
    };

    // R is convex in d, so golden-section search finds the constrained minimum.
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = 0.0;
    double b = kMaxMemoryParameter;
    double c = b - inv_phi * (b - a);
    double e = a + inv_phi * (b - a);
    double fc = objective(c);
    double fe = objective(e);
    while (b - a > 1e-6) {
        if (fc < fe) {
            b = e;
            e = c;
            fe = fc;
            c = b - inv_phi * (b - a);
            fc = objective(c);
        } else {
            a = c;
            c = e;
            fc = fe;
            e = a + inv_phi * (b - a);
            fe = objective(e);
        }
    }
    double d_hat = 0.5 * (a + b);
    // snap to an endpoint when the interior point is no better
    if (objective(0.0) <= objective(d_hat)) d_hat = 0.0;
    if (objective(kMaxMemoryParameter) < objective(d_hat)) d_hat = kMaxMemoryParameter;
    return {std::clamp(d_hat, 0.0, kMaxMemoryParameter), m};
}

}  // namespace lmpivot
