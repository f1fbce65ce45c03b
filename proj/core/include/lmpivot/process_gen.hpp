#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "lmpivot/rng.hpp"

namespace lmpivot {

/// Observed series X_1..X_n.
using SampleSeries = std::vector<double>;

/// Innovation law; both are standardized to mean 0 and variance 1.
enum class InnovationKind {
    GaussianStd,
    LognormalStd,  ///< (e^Z - e^{1/2}) / sqrt(e(e-1)), Z ~ N(0,1)
};

/// X_t = mu + e_t + theta e_{t-1}
struct MA1 {
    double theta = -0.5;
};

/// X_t = mu(1-phi) + phi X_{t-1} + e_t
struct AR1 {
    double phi = 0.5;
};

/// Fractionally integrated noise (1-B)^{-d} e_t, 0 < d < 1/2.
struct Farima {
    double d = 0.2;
};

using ProcessModel = std::variant<MA1, AR1, Farima>;

struct ProcessSpec {
    ProcessModel model = MA1{};
    double mu = 0.0;
    InnovationKind innovations = InnovationKind::GaussianStd;
    /// MA(infinity) truncation for FARIMA; unset means default_truncation(n).
    std::optional<std::size_t> truncation_K;
    /// AR(1) warm-up length.
    std::size_t burnin = 1000;
};

/// Throws ParameterDomainError when the model parameters are inadmissible.
void validate(const ProcessSpec& spec);

/// Memory parameter of the model: d for FARIMA, 0 for the short-memory models.
double memory_parameter(const ProcessSpec& spec);
bool is_long_memory(const ProcessSpec& spec);

std::string model_name(const ProcessSpec& spec);
std::string innovation_name(InnovationKind kind);

/// max(10^4, 50 n)
std::size_t default_truncation(std::size_t n);

/// One standardized innovation.
double draw_innovation(InnovationKind kind, RngStream& rng);

/// psi_0 = 1, psi_k = psi_{k-1} (k - 1 + d) / k, i.e. Gamma(k+d) / (Gamma(d) Gamma(k+1)).
std::vector<double> farima_ma_coeffs(double d, std::size_t K);

/// Exact autocovariance at lag h with unit innovation variance.
double theoretical_acvf(const ProcessSpec& spec, std::size_t h);

/// theoretical_acvf at lags 0..count-1.
std::vector<double> theoretical_acvf_seq(const ProcessSpec& spec, std::size_t count);

/// Number of innovations consumed ahead of X_1 when generating n values.
std::size_t presample_length(const ProcessSpec& spec, std::size_t n);

/// Deterministic filter from a supplied innovation sequence of length
/// presample_length(spec, n) + n. The FARIMA branch is the direct O(nK) sum.
SampleSeries filter_innovations(const ProcessSpec& spec, std::size_t n,
                                std::span<const double> innovations);

/// Reusable generator for a fixed (spec, n).
///
/// FARIMA paths are produced by FFT convolution of the innovations with the
/// truncated coefficient sequence; the transform of the coefficients is
/// computed once here. operator() is const and may be called concurrently
/// with distinct streams.
class Simulator {
public:
    Simulator(ProcessSpec spec, std::size_t n);
    ~Simulator();
    Simulator(Simulator&&) noexcept;
    Simulator& operator=(Simulator&&) noexcept;

    [[nodiscard]] SampleSeries operator()(RngStream& rng) const;

    [[nodiscard]] const ProcessSpec& spec() const noexcept { return spec_; }
    [[nodiscard]] std::size_t n() const noexcept { return n_; }

private:
    struct FarimaKernel;
    ProcessSpec spec_;
    std::size_t n_;
    std::unique_ptr<FarimaKernel> farima_;
};

/// One path of length n (n >= 2).
SampleSeries simulate(const ProcessSpec& spec, std::size_t n, RngStream& rng);

}  // namespace lmpivot
