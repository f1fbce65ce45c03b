#include "lmpivot/acvf.hpp"

#include <algorithm>
#include <cmath>

#include "lmpivot/errors.hpp"

namespace lmpivot {

double sample_mean(std::span<const double> x) {
    if (x.empty()) throw ParameterDomainError("sample_mean of an empty series");
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

double sample_acvf(std::span<const double> x, std::size_t h) {
    if (h >= x.size()) throw ParameterDomainError("sample_acvf requires h < n");
    const double m = sample_mean(x);
    double s = 0.0;
    for (std::size_t j = 0; j + h < x.size(); ++j) s += (x[j] - m) * (x[j + h] - m);
    return s / static_cast<double>(x.size());
}

AcvfEstimates estimate_acvf(std::span<const double> x, std::size_t q) {
    if (q >= x.size()) throw ParameterDomainError("bandwidth q must be below n");
    AcvfEstimates est;
    est.n = x.size();
    est.q = q;
    est.mean = sample_mean(x);
    std::vector<double> centered(x.size());
    std::transform(x.begin(), x.end(), centered.begin(), [&](double v) { return v - est.mean; });
    est.gammas.resize(q + 1);
    const auto nd = static_cast<double>(x.size());
    for (std::size_t h = 0; h <= q; ++h) {
        double s = 0.0;
        for (std::size_t j = 0; j + h < centered.size(); ++j) s += centered[j] * centered[j + h];
        est.gammas[h] = s / nd;
    }
    return est;
}

std::size_t bandwidth_q(std::size_t n, double d) {
    if (n < 8) throw ParameterDomainError("bandwidth_q requires n >= 8");
    if (!(d >= 0.0 && d < 0.5)) throw ParameterDomainError("bandwidth_q requires d in [0, 0.5)");
    const auto nd = static_cast<double>(n);
    double exponent;
    if (d == 0.0)
        exponent = 1.0 / 3.0;
    else if (d < 0.25)
        exponent = 1.0 / (3.0 + 4.0 * d);
    else
        exponent = 0.5 - d;
    const auto raw = static_cast<std::size_t>(std::ceil(std::pow(nd, exponent) - 1e-12));
    const auto cap = static_cast<std::size_t>(std::floor(std::sqrt(nd)));
    return std::clamp<std::size_t>(raw, 1, cap);
}

}  // namespace lmpivot
