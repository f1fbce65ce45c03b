#include "lmpivot/pivots.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fft.hpp"
#include "lmpivot/acvf.hpp"
#include "lmpivot/errors.hpp"

namespace lmpivot {

namespace {

void check_lengths(std::span<const double> x, const WeightVector& w) {
    if (x.size() != w.n()) throw ShapeError("series length differs from weight vector length");
}

void check_weights(const WeightVector& w) {
    if (w.is_degenerate()) throw DegenerateWeights();
}

void check_d(double d) {
    if (!(d >= 0.0 && d < 0.5)) throw ParameterDomainError("memory parameter must lie in [0, 0.5)");
}

double checked_sqrt(double radicand, const char* what) {
    if (!(radicand > 0.0) || !std::isfinite(radicand))
        throw NonpositiveStudentizer(std::string("nonpositive studentizer in ") + what);
    return std::sqrt(radicand);
}

PivotValue finite(double value, PivotKind kind) {
    if (!std::isfinite(value)) throw NumericError("pivot value is not finite");
    return {value, kind};
}

// sum over lags of gamma_h r_h with r_h = sum_j a_j a_{j+h}
double quadratic_form(std::span<const double> a, std::span<const double> gamma) {
    if (gamma.empty()) throw ParameterDomainError("at least gamma_0 is required");
    const auto r = detail::lagged_products(a);
    double cross = 0.0;
    const std::size_t lags = std::min(r.size(), gamma.size());
    for (std::size_t h = 1; h < lags; ++h) cross += gamma[h] * r[h];
    return gamma[0] * r[0] + 2.0 * cross;
}

}  // namespace

std::string_view pivot_name(PivotKind kind) {
    switch (kind) {
        case PivotKind::Gn: return "Gn";
        case PivotKind::GnStu: return "GnStu";
        case PivotKind::TnStu: return "TnStu";
        case PivotKind::TStar: return "TStar";
        case PivotKind::TStarShort: return "TStarShort";
        case PivotKind::TStarStu: return "TStarStu";
    }
    return "?";
}

double randomized_abs_sum(std::span<const double> x, const WeightVector& w, double mu) {
    check_lengths(x, w);
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += w.abs_deviation(i) * (x[i] - mu);
    return s / static_cast<double>(x.size());
}

double randomized_signed_sum(std::span<const double> x, const WeightVector& w) {
    check_lengths(x, w);
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += w.deviation(i) * x[i];
    return s / static_cast<double>(x.size());
}

double conditional_signed_variance(const WeightVector& w, std::span<const double> gamma) {
    std::vector<double> c(w.n());
    const auto n = static_cast<double>(w.n());
    for (std::size_t j = 0; j < w.n(); ++j) c[j] = w.deviation(j) / n;
    return quadratic_form(c, gamma);
}

double conditional_abs_variance(const WeightVector& w, std::span<const double> gamma) {
    std::vector<double> c(w.n());
    const auto n = static_cast<double>(w.n());
    for (std::size_t j = 0; j < w.n(); ++j) c[j] = w.abs_deviation(j) / n;
    return quadratic_form(c, gamma);
}

PivotValue g_n(std::span<const double> x, const WeightVector& w, double mu,
               std::span<const double> gamma) {
    check_lengths(x, w);
    check_weights(w);
    if (gamma.empty() || !(gamma[0] > 0.0)) throw ParameterDomainError("G_n requires gamma_0 > 0");
    const double denom = checked_sqrt(conditional_abs_variance(w, gamma), "G_n");
    return finite(randomized_abs_sum(x, w, mu) / denom, PivotKind::Gn);
}

VarianceComponents variance_components(std::span<const double> x, const WeightVector& w,
                                       std::size_t q, double d) {
    check_lengths(x, w);
    check_d(d);
    const std::size_t n = x.size();
    if (q < 1 || q > n - 1) throw ParameterDomainError("bandwidth q must lie in [1, n-1]");
    const auto est = estimate_acvf(x, q);
    const double log_n = std::log(static_cast<double>(n));
    const double log_q = std::log(static_cast<double>(q));

    VarianceComponents vc;
    vc.d_used = d;
    vc.q_used = q;
    // (q/n)^{-2d}
    vc.lag0_term = std::exp(-2.0 * d * (log_q - log_n)) * est.gammas[0] * sum_sq_centered(w);
    double cross = 0.0;
    for (std::size_t h = 1; h <= q; ++h) cross += est.gammas[h] * abs_lag_product_sum(w, h, q);
    // 1 / (n^{1-2d} q^{1+2d})
    const double scale = std::exp(-(1.0 - 2.0 * d) * log_n - (1.0 + 2.0 * d) * log_q);
    vc.cross_term = 2.0 * cross * scale;
    vc.total = vc.lag0_term + vc.cross_term;
    return vc;
}

PivotValue g_n_stu(std::span<const double> x, const WeightVector& w, std::size_t q, double d,
                   double mu) {
    check_lengths(x, w);
    check_weights(w);
    const auto vc = variance_components(x, w, q, d);
    const double denom = checked_sqrt(vc.total, "G_n^stu");
    return finite(randomized_abs_sum(x, w, mu) / denom, PivotKind::GnStu);
}

PivotValue t_n_stu(std::span<const double> x, std::size_t q, double d, double mu) {
    check_d(d);
    const std::size_t n = x.size();
    if (n < 2 || q < 1 || q > n - 1) throw ParameterDomainError("bandwidth q must lie in [1, n-1]");
    const auto est = estimate_acvf(x, q);
    const auto qd = static_cast<double>(q);
    double s = est.gammas[0];
    for (std::size_t h = 1; h <= q; ++h) s += 2.0 * est.gammas[h] * (1.0 - static_cast<double>(h) / qd);
    const double radicand = std::exp(-2.0 * d * std::log(qd)) * s;
    const double denom = checked_sqrt(radicand, "T_n^stu");
    const double scale = std::exp((0.5 - d) * std::log(static_cast<double>(n)));
    return finite(scale * (est.mean - mu) / denom, PivotKind::TnStu);
}

PivotValue t_star(std::span<const double> x, const WeightVector& w,
                  std::span<const double> gamma) {
    check_lengths(x, w);
    check_weights(w);
    const double denom = checked_sqrt(conditional_signed_variance(w, gamma), "T*");
    return finite(randomized_signed_sum(x, w) / denom, PivotKind::TStar);
}

PivotValue t_star_short(std::span<const double> x, const WeightVector& w, double gamma0) {
    check_lengths(x, w);
    check_weights(w);
    const double denom = checked_sqrt(gamma0 * sum_sq_centered(w), "T* (lag-0 form)");
    return finite(randomized_signed_sum(x, w) / denom, PivotKind::TStarShort);
}

PivotValue t_star_stu(std::span<const double> x, const WeightVector& w) {
    check_lengths(x, w);
    check_weights(w);
    const double gamma0 = sample_acvf(x, 0);
    const double denom = checked_sqrt(gamma0 * sum_sq_centered(w), "T*^stu");
    return finite(randomized_signed_sum(x, w) / denom, PivotKind::TStarStu);
}

double tstar_variance_diagnostic(const ProcessSpec& spec, std::size_t n, std::size_t reps,
                                 RngStream& rng) {
    validate(spec);
    if (n < 2 || reps == 0) throw ParameterDomainError("diagnostic requires n >= 2 and reps >= 1");
    const double d = memory_parameter(spec);
    const auto gamma = theoretical_acvf_seq(spec, n);
    const double scale = std::exp((1.0 - 2.0 * d) * std::log(static_cast<double>(n)));
    double total = 0.0;
    for (std::size_t r = 0; r < reps; ++r) {
        const auto w = draw_weights(n, rng);
        total += scale * conditional_signed_variance(w, gamma);
    }
    return total / static_cast<double>(reps);
}

}  // namespace lmpivot
