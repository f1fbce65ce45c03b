#include "lmpivot/process_gen.hpp"

#include <cmath>
#include <sstream>

#include "fft.hpp"
#include "lmpivot/errors.hpp"

namespace lmpivot {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

const double kLognormalShift = std::exp(0.5);
const double kLognormalScale = std::sqrt(std::exp(1.0) * (std::exp(1.0) - 1.0));

void check_farima_d(double d) {
    if (!(d > 0.0 && d < 0.5))
        throw ParameterDomainError("FARIMA memory parameter d must lie in (0, 0.5)");
}

std::size_t truncation_for(const ProcessSpec& spec, std::size_t n) {
    return spec.truncation_K.value_or(default_truncation(n));
}

}  // namespace

void validate(const ProcessSpec& spec) {
    if (!std::isfinite(spec.mu)) throw ParameterDomainError("mu must be finite");
    std::visit(Overloaded{
                   [](const MA1& m) {
                       if (!std::isfinite(m.theta))
                           throw ParameterDomainError("MA(1) theta must be finite");
                   },
                   [](const AR1& m) {
                       if (!(std::abs(m.phi) < 1.0))
                           throw ParameterDomainError("AR(1) requires |phi| < 1");
                   },
                   [](const Farima& m) { check_farima_d(m.d); },
               },
               spec.model);
}

double memory_parameter(const ProcessSpec& spec) {
    if (const auto* f = std::get_if<Farima>(&spec.model)) return f->d;
    return 0.0;
}

bool is_long_memory(const ProcessSpec& spec) {
    return std::holds_alternative<Farima>(spec.model);
}

std::string model_name(const ProcessSpec& spec) {
    std::ostringstream os;
    std::visit(Overloaded{
                   [&](const MA1& m) { os << "MA1(theta=" << m.theta << ")"; },
                   [&](const AR1& m) { os << "AR1(phi=" << m.phi << ")"; },
                   [&](const Farima& m) { os << "FARIMA(d=" << m.d << ")"; },
               },
               spec.model);
    return os.str();
}

std::string innovation_name(InnovationKind kind) {
    return kind == InnovationKind::GaussianStd ? "gaussian" : "lognormal";
}

std::size_t default_truncation(std::size_t n) {
    return std::max<std::size_t>(10000, 50 * n);
}

double draw_innovation(InnovationKind kind, RngStream& rng) {
    const double z = rng.normal();
    if (kind == InnovationKind::GaussianStd) return z;
    return (std::exp(z) - kLognormalShift) / kLognormalScale;
}

std::vector<double> farima_ma_coeffs(double d, std::size_t K) {
    check_farima_d(d);
    std::vector<double> psi(K + 1);
    psi[0] = 1.0;
    for (std::size_t k = 1; k <= K; ++k) {
        const auto kd = static_cast<double>(k);
        psi[k] = psi[k - 1] * (kd - 1.0 + d) / kd;
    }
    return psi;
}

double theoretical_acvf(const ProcessSpec& spec, std::size_t h) {
    validate(spec);
    const auto hd = static_cast<double>(h);
    return std::visit(
        Overloaded{
            [&](const MA1& m) {
                if (h == 0) return 1.0 + m.theta * m.theta;
                return h == 1 ? m.theta : 0.0;
            },
            [&](const AR1& m) { return std::pow(m.phi, hd) / (1.0 - m.phi * m.phi); },
            [&](const Farima& m) {
                const double d = m.d;
                return std::exp(std::lgamma(1.0 - 2.0 * d) + std::lgamma(hd + d) -
                                std::lgamma(d) - std::lgamma(1.0 - d) -
                                std::lgamma(hd + 1.0 - d));
            },
        },
        spec.model);
}

std::vector<double> theoretical_acvf_seq(const ProcessSpec& spec, std::size_t count) {
    std::vector<double> g(count);
    if (count == 0) return g;
    g[0] = theoretical_acvf(spec, 0);
    if (const auto* f = std::get_if<Farima>(&spec.model)) {
        // gamma_h = gamma_{h-1} (h - 1 + d) / (h - d)
        for (std::size_t h = 1; h < count; ++h) {
            const auto hd = static_cast<double>(h);
            g[h] = g[h - 1] * (hd - 1.0 + f->d) / (hd - f->d);
        }
    } else {
        for (std::size_t h = 1; h < count; ++h) g[h] = theoretical_acvf(spec, h);
    }
    return g;
}

std::size_t presample_length(const ProcessSpec& spec, std::size_t n) {
    return std::visit(Overloaded{
                          [](const MA1&) -> std::size_t { return 1; },
                          [&](const AR1&) -> std::size_t { return spec.burnin; },
                          [&](const Farima&) -> std::size_t { return truncation_for(spec, n); },
                      },
                      spec.model);
}

SampleSeries filter_innovations(const ProcessSpec& spec, std::size_t n,
                                std::span<const double> innovations) {
    validate(spec);
    const std::size_t pre = presample_length(spec, n);
    if (innovations.size() != pre + n)
        throw ShapeError("innovation sequence must have presample_length + n entries");
    SampleSeries x(n);
    std::visit(Overloaded{
                   [&](const MA1& m) {
                       for (std::size_t t = 0; t < n; ++t)
                           x[t] = spec.mu + innovations[t + 1] + m.theta * innovations[t];
                   },
                   [&](const AR1& m) {
                       // deviation from mu, started at 0 before the burn-in
                       double dev = 0.0;
                       for (std::size_t t = 0; t < pre; ++t) dev = m.phi * dev + innovations[t];
                       for (std::size_t t = 0; t < n; ++t) {
                           dev = m.phi * dev + innovations[pre + t];
                           x[t] = spec.mu + dev;
                       }
                   },
                   [&](const Farima& m) {
                       const auto psi = farima_ma_coeffs(m.d, pre);
                       for (std::size_t t = 0; t < n; ++t) {
                           double s = 0.0;
                           for (std::size_t k = 0; k <= pre; ++k) s += psi[k] * innovations[pre + t - k];
                           x[t] = spec.mu + s;
                       }
                   },
               },
               spec.model);
    return x;
}

struct Simulator::FarimaKernel {
    FarimaKernel(std::span<const double> psi, std::size_t n) : convolver(psi, n) {}
    detail::CausalConvolver convolver;
};

Simulator::Simulator(ProcessSpec spec, std::size_t n) : spec_(std::move(spec)), n_(n) {
    validate(spec_);
    if (n_ < 2) throw ParameterDomainError("simulate requires n >= 2");
    if (const auto* f = std::get_if<Farima>(&spec_.model)) {
        const auto psi = farima_ma_coeffs(f->d, truncation_for(spec_, n_));
        farima_ = std::make_unique<FarimaKernel>(psi, n_);
    }
}

Simulator::~Simulator() = default;
Simulator::Simulator(Simulator&&) noexcept = default;
Simulator& Simulator::operator=(Simulator&&) noexcept = default;

SampleSeries Simulator::operator()(RngStream& rng) const {
    const std::size_t total = presample_length(spec_, n_) + n_;
    std::vector<double> innovations(total);
    for (auto& e : innovations) e = draw_innovation(spec_.innovations, rng);
    if (!farima_) return filter_innovations(spec_, n_, innovations);
    auto x = farima_->convolver.apply(innovations);
    for (auto& v : x) v += spec_.mu;
    return x;
}

SampleSeries simulate(const ProcessSpec& spec, std::size_t n, RngStream& rng) {
    return Simulator(spec, n)(rng);
}

}  // namespace lmpivot
