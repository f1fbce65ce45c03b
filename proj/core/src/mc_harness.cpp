#include "lmpivot/mc_harness.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include "lmpivot/acvf.hpp"
#include "lmpivot/csv.hpp"
#include "lmpivot/errors.hpp"
#include "lmpivot/intervals.hpp"
#include "lmpivot/memory_est.hpp"
#include "lmpivot/pivots.hpp"
#include "lmpivot/rand_weights.hpp"

namespace lmpivot {

namespace {

constexpr std::size_t kPivotCount = 4;

enum class Outcome : std::uint8_t { NotRequested, Hit, Miss, Nonpositive, Failed };

struct RepOutcome {
    std::array<Outcome, kPivotCount> pivot{};
    std::uint32_t draws = 0;
    std::uint32_t degenerate = 0;
    std::size_t q = 0;
    double d_used = 0.0;
    bool failed = false;
};

std::size_t index_of(HarnessPivot p) { return static_cast<std::size_t>(p); }

unsigned resolve_threads(const RunOptions& opts) {
    if (opts.threads > 0) return opts.threads;
    return std::max(1u, std::thread::hardware_concurrency());
}

// Runs fn(i) for i in [0, count). Work is claimed dynamically; callers write into
// per-index slots, so the result does not depend on scheduling.
template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    {
        std::vector<std::jthread> workers;
        workers.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) {
            workers.emplace_back([&] {
                for (std::size_t i = next++; i < count; i = next++) {
                    try {
                        fn(i);
                    } catch (...) {
                        std::lock_guard lock(error_mutex);
                        if (!first_error) first_error = std::current_exception();
                    }
                }
            });
        }
    }
    if (first_error) std::rethrow_exception(first_error);
}

/// Fixed per-experiment state shared by all replications.
struct ExperimentContext {
    const ExperimentConfig& cfg;
    Simulator simulator;
    std::vector<double> gamma;  // theoretical, only when TStar is requested
    double cutoff;

    explicit ExperimentContext(const ExperimentConfig& c)
        : cfg(c), simulator(c.spec, c.n), cutoff(z_quantile(1.0 - (1.0 - c.nominal) / 2.0)) {
        if (std::find(c.pivots.begin(), c.pivots.end(), HarnessPivot::TStar) != c.pivots.end())
            gamma = theoretical_acvf_seq(c.spec, c.n);
    }
};

Outcome score(double value, double cutoff) {
    return std::abs(value) <= cutoff ? Outcome::Hit : Outcome::Miss;
}

RepOutcome run_replication(const ExperimentContext& ctx, const RngStream& rep_stream) {
    const auto& cfg = ctx.cfg;
    RepOutcome out;
    for (auto& o : out.pivot) o = Outcome::NotRequested;

    auto data_rng = rep_stream.child(StreamPurpose::Data);
    auto weight_rng = rep_stream.child(StreamPurpose::Weights);
    const auto x = ctx.simulator(data_rng);

    std::optional<WeightVector> weights;
    for (std::size_t attempt = 0; attempt < kMaxWeightRedraws; ++attempt) {
        auto w = draw_weights(cfg.n, weight_rng);
        ++out.draws;
        if (!w.is_degenerate()) {
            weights.emplace(std::move(w));
            break;
        }
        ++out.degenerate;
    }

    double d = 0.0;
    try {
        switch (cfg.d_mode) {
            case DMode::KnownZero: d = 0.0; break;
            case DMode::KnownD: d = memory_parameter(cfg.spec); break;
            case DMode::EstimatedD:
                d = local_whittle(x, cfg.whittle_m.value_or(default_whittle_bandwidth(cfg.n))).d_hat;
                break;
        }
        out.q = cfg.q_override ? *cfg.q_override : bandwidth_q(cfg.n, d);
    } catch (const Error&) {
        out.failed = true;
    }
    out.d_used = d;
    if (!weights || out.failed) {
        out.failed = true;
        for (auto p : cfg.pivots) out.pivot[index_of(p)] = Outcome::Failed;
        return out;
    }

    const double mu = cfg.spec.mu;
    for (auto p : cfg.pivots) {
        Outcome& slot = out.pivot[index_of(p)];
        try {
            double value = 0.0;
            switch (p) {
                case HarnessPivot::GStu: value = g_n_stu(x, *weights, out.q, d, mu).value; break;
                case HarnessPivot::TStu: value = t_n_stu(x, out.q, d, mu).value; break;
                case HarnessPivot::TStar: value = t_star(x, *weights, ctx.gamma).value; break;
                case HarnessPivot::TStarStu: value = t_star_stu(x, *weights).value; break;
            }
            slot = score(value, ctx.cutoff);
        } catch (const NonpositiveStudentizer&) {
            slot = Outcome::Nonpositive;
        } catch (const Error&) {
            slot = Outcome::Failed;
        }
    }
    return out;
}

struct Tally {
    std::map<HarnessPivot, PivotCoverage> per_pivot;
    std::size_t draws = 0;
    std::size_t degenerate = 0;
    std::size_t failed = 0;
    std::size_t q_min = 0;
    std::size_t q_max = 0;
    double d_sum = 0.0;
    std::size_t d_count = 0;
};

// In replication order, so floating sums are reproducible.
Tally tally(const std::vector<RepOutcome>& outcomes, const std::vector<HarnessPivot>& pivots,
            Tally t = {}) {
    for (auto p : pivots) t.per_pivot.try_emplace(p);
    for (const auto& o : outcomes) {
        t.draws += o.draws;
        t.degenerate += o.degenerate;
        if (o.failed) {
            ++t.failed;
        } else {
            t.q_min = t.q_min == 0 ? o.q : std::min(t.q_min, o.q);
            t.q_max = std::max(t.q_max, o.q);
            t.d_sum += o.d_used;
            ++t.d_count;
        }
        for (auto p : pivots) {
            auto& c = t.per_pivot[p];
            ++c.attempted;
            switch (o.pivot[index_of(p)]) {
                case Outcome::Hit: ++c.hits; ++c.valid; break;
                case Outcome::Miss: ++c.valid; break;
                case Outcome::Nonpositive: ++c.nonpositive; break;
                default: break;
            }
        }
    }
    return t;
}

std::vector<RepOutcome> run_block(const ExperimentContext& ctx, const RngStream& base,
                                  unsigned threads) {
    std::vector<RepOutcome> outcomes(ctx.cfg.reps);
    parallel_for(ctx.cfg.reps, threads,
                 [&](std::size_t r) { outcomes[r] = run_replication(ctx, base.child(r)); });
    return outcomes;
}

std::string stream_scheme(bool proportion) {
    return proportion ? "xoshiro256** keyed by splitmix64(master)/experiment/outer/rep/purpose"
                      : "xoshiro256** keyed by splitmix64(master)/experiment/rep/purpose";
}

}  // namespace

std::string d_mode_name(DMode mode) {
    switch (mode) {
        case DMode::KnownZero: return "known-zero";
        case DMode::KnownD: return "known-d";
        case DMode::EstimatedD: return "estimated-d";
    }
    return "?";
}

std::string harness_pivot_name(HarnessPivot pivot) {
    switch (pivot) {
        case HarnessPivot::GStu: return "GStu";
        case HarnessPivot::TStu: return "TStu";
        case HarnessPivot::TStar: return "TStar";
        case HarnessPivot::TStarStu: return "TStarStu";
    }
    return "?";
}

double PivotCoverage::coverage() const noexcept {
    return valid == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(valid);
}

double PivotCoverage::std_error() const noexcept {
    if (valid == 0) return 0.0;
    const double p = coverage();
    return std::sqrt(p * (1.0 - p) / static_cast<double>(valid));
}

double PivotCoverage::nonpositive_rate() const noexcept {
    return attempted == 0 ? 0.0 : static_cast<double>(nonpositive) / static_cast<double>(attempted);
}

double CoverageResult::degenerate_rate() const noexcept {
    return weight_draws == 0 ? 0.0
                             : static_cast<double>(degenerate_draws) / static_cast<double>(weight_draws);
}

double CoverageResult::nonpositive_rate() const noexcept {
    std::size_t bad = 0;
    std::size_t total = 0;
    for (const auto& [p, c] : per_pivot) {
        bad += c.nonpositive;
        total += c.attempted;
    }
    return total == 0 ? 0.0 : static_cast<double>(bad) / static_cast<double>(total);
}

double ProportionResult::degenerate_rate() const noexcept {
    return weight_draws == 0 ? 0.0
                             : static_cast<double>(degenerate_draws) / static_cast<double>(weight_draws);
}

void validate(const ExperimentConfig& cfg) {
    validate(cfg.spec);
    if (cfg.n < 2) throw ParameterDomainError("experiment requires n >= 2");
    if (cfg.reps < 1) throw ParameterDomainError("experiment requires reps >= 1");
    if (!(cfg.nominal > 0.0 && cfg.nominal < 1.0))
        throw ParameterDomainError("nominal coverage must lie in (0, 1)");
    if (cfg.pivots.empty()) throw ParameterDomainError("no pivots requested");
    if (cfg.q_override && (*cfg.q_override < 1 || *cfg.q_override > cfg.n - 1))
        throw ParameterDomainError("q override must lie in [1, n-1]");
    if (!cfg.q_override && cfg.n < 8)
        throw ParameterDomainError("bandwidth rule requires n >= 8; pass a q override");
    if (cfg.d_mode == DMode::EstimatedD) {
        const auto m = cfg.whittle_m.value_or(default_whittle_bandwidth(cfg.n));
        if (m < 8 || m > (cfg.n - 1) / 2)
            throw ParameterDomainError("local Whittle bandwidth m out of range for this n");
    }
}

CoverageResult coverage_experiment(const ExperimentConfig& cfg, const RunOptions& opts) {
    validate(cfg);
    const auto start = std::chrono::steady_clock::now();
    const ExperimentContext ctx(cfg);
    const auto base = RngStream::derive(cfg.master_seed, {cfg.experiment_id});
    const auto t = tally(run_block(ctx, base, resolve_threads(opts)), cfg.pivots);

    CoverageResult res;
    res.per_pivot = t.per_pivot;
    res.reps = cfg.reps;
    res.weight_draws = t.draws;
    res.degenerate_draws = t.degenerate;
    res.failed_reps = t.failed;
    res.q_min = t.q_min;
    res.q_max = t.q_max;
    res.mean_d_used = t.d_count == 0 ? 0.0 : t.d_sum / static_cast<double>(t.d_count);
    res.seed_lineage = {cfg.master_seed, cfg.experiment_id, stream_scheme(false)};
    res.wall_time = std::chrono::steady_clock::now() - start;
    return res;
}

ProportionResult proportion_experiment(const ExperimentConfig& cfg, const RunOptions& opts) {
    validate(cfg);
    if (cfg.outer_reps < 1) throw ParameterDomainError("proportion experiment requires outer_reps >= 1");
    const auto start = std::chrono::steady_clock::now();
    const ExperimentContext ctx(cfg);

    std::vector<Tally> outer(cfg.outer_reps);
    parallel_for(cfg.outer_reps, resolve_threads(opts), [&](std::size_t o) {
        const auto base = RngStream::derive(cfg.master_seed, {cfg.experiment_id, o});
        outer[o] = tally(run_block(ctx, base, 1), cfg.pivots);
    });

    ProportionResult res;
    res.outer = cfg.outer_reps;
    res.inner = cfg.reps;
    for (auto p : cfg.pivots) {
        std::size_t close = 0;
        auto& values = res.outer_coverages[p];
        auto& pooled = res.pooled[p];
        for (const auto& t : outer) {
            const auto& c = t.per_pivot.at(p);
            values.push_back(c.coverage());
            if (c.valid > 0 && std::abs(c.coverage() - cfg.nominal) <= kProportionBand + 1e-12) ++close;
            pooled.hits += c.hits;
            pooled.valid += c.valid;
            pooled.nonpositive += c.nonpositive;
            pooled.attempted += c.attempted;
        }
        res.prop[p] = static_cast<double>(close) / static_cast<double>(cfg.outer_reps);
    }
    for (const auto& t : outer) {
        res.weight_draws += t.draws;
        res.degenerate_draws += t.degenerate;
        res.failed_reps += t.failed;
        if (t.q_min != 0) res.q_min = res.q_min == 0 ? t.q_min : std::min(res.q_min, t.q_min);
        res.q_max = std::max(res.q_max, t.q_max);
    }
    res.seed_lineage = {cfg.master_seed, cfg.experiment_id, stream_scheme(true)};
    res.wall_time = std::chrono::steady_clock::now() - start;
    return res;
}

namespace {

struct TableLayout {
    ProcessSpec spec;
    DMode d_mode;
    std::vector<std::size_t> sizes;
    bool proportion;
};

TableLayout layout_for(int table_id) {
    const auto gauss = InnovationKind::GaussianStd;
    const auto logn = InnovationKind::LognormalStd;
    auto make = [](ProcessModel m, InnovationKind k) {
        ProcessSpec s;
        s.model = m;
        s.innovations = k;
        return s;
    };
    switch (table_id) {
        case 1: return {make(MA1{-0.5}, gauss), DMode::KnownZero, {20, 30}, false};
        case 2: return {make(AR1{0.5}, gauss), DMode::KnownZero, {20, 30}, false};
        case 3: return {make(Farima{0.2}, gauss), DMode::KnownD, {30, 50}, false};
        case 4: return {make(Farima{0.2}, gauss), DMode::EstimatedD, {200, 300}, false};
        case 5: return {make(Farima{0.4}, gauss), DMode::KnownD, {300, 400}, false};
        case 6: return {make(Farima{0.4}, gauss), DMode::EstimatedD, {500, 1000}, false};
        case 7: return {make(MA1{-0.5}, logn), DMode::KnownZero, {20, 30}, true};
        case 8: return {make(AR1{0.5}, logn), DMode::KnownZero, {70, 80}, true};
        case 9: return {make(Farima{0.2}, logn), DMode::KnownD, {150, 250}, true};
        case 10: return {make(Farima{0.2}, logn), DMode::EstimatedD, {400, 500}, true};
        case 11: return {make(Farima{0.4}, logn), DMode::KnownD, {300, 400}, true};
        case 12: return {make(Farima{0.4}, logn), DMode::EstimatedD, {1500, 2000}, true};
        default: throw ParameterDomainError("unknown table id " + std::to_string(table_id));
    }
}

std::size_t scaled(std::size_t count, double scale) {
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(static_cast<double>(count) * scale)));
}

std::string q_field(std::size_t q_min, std::size_t q_max) {
    if (q_min == q_max) return std::to_string(q_min);
    return std::to_string(q_min) + "-" + std::to_string(q_max);
}

}  // namespace

std::vector<TableCell> table_cells(int table_id, const TableOverrides& overrides) {
    if (!(overrides.scale > 0.0)) throw ParameterDomainError("scale must be positive");
    const auto layout = layout_for(table_id);
    std::vector<TableCell> cells;
    for (std::size_t i = 0; i < layout.sizes.size(); ++i) {
        ExperimentConfig cfg;
        cfg.spec = layout.spec;
        cfg.n = layout.sizes[i];
        cfg.d_mode = layout.d_mode;
        cfg.pivots = {HarnessPivot::GStu, HarnessPivot::TStu};
        cfg.master_seed = overrides.master_seed;
        cfg.experiment_id = static_cast<std::uint64_t>(table_id) * 100 + i;
        cfg.q_override = overrides.q_override;
        cfg.whittle_m = overrides.whittle_m;
        if (layout.proportion) {
            cfg.reps = scaled(500, overrides.scale);
            cfg.outer_reps = scaled(500, overrides.scale);
        } else {
            cfg.reps = scaled(1000, overrides.scale);
        }
        cells.push_back({cfg, layout.proportion});
    }
    return cells;
}

TableRun run_table(int table_id, const TableOverrides& overrides) {
    const auto cells = table_cells(table_id, overrides);
    TableRun run;
    const auto fmt = csv::format_double;
    run.header = {
        {"command", "reproduce"},
        {"table", std::to_string(table_id)},
        {"experiment", cells.front().proportion ? "proportion" : "coverage"},
        {"seed", std::to_string(overrides.master_seed)},
        {"scale", fmt(overrides.scale)},
        {"q_override", overrides.q_override ? std::to_string(*overrides.q_override) : "rule"},
        {"whittle_m", overrides.whittle_m ? std::to_string(*overrides.whittle_m) : "round(n^0.65)"},
        {"nominal", fmt(cells.front().config.nominal)},
        {"stream_scheme", stream_scheme(cells.front().proportion)},
    };
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const auto& c = cells[i].config;
        std::ostringstream desc;
        desc << model_name(c.spec) << " " << innovation_name(c.spec.innovations) << " n=" << c.n
             << " d_mode=" << d_mode_name(c.d_mode) << " reps=" << c.reps;
        if (cells[i].proportion) desc << " outer=" << c.outer_reps;
        desc << " experiment_id=" << c.experiment_id;
        run.header.emplace_back("cell" + std::to_string(i), desc.str());
    }

    for (const auto& cell : cells) {
        const auto& c = cell.config;
        auto base_row = [&](HarnessPivot p, std::size_t q_min, std::size_t q_max) {
            return std::vector<std::string>{std::to_string(table_id),
                                            model_name(c.spec),
                                            innovation_name(c.spec.innovations),
                                            std::to_string(c.n),
                                            q_field(q_min, q_max),
                                            d_mode_name(c.d_mode),
                                            harness_pivot_name(p)};
        };
        try {
            if (cell.proportion) {
                const auto res = proportion_experiment(c, overrides.run);
                for (auto p : c.pivots) {
                    auto row = base_row(p, res.q_min, res.q_max);
                    const double prop = res.prop.at(p);
                    const double se = std::sqrt(prop * (1.0 - prop) / static_cast<double>(res.outer));
                    row.insert(row.end(), {fmt(prop), fmt(se), fmt(res.degenerate_rate()),
                                           fmt(res.pooled.at(p).nonpositive_rate()),
                                           std::to_string(c.master_seed)});
                    if (res.pooled.at(p).valid == 0) run.all_cells_completed = false;
                    run.rows.push_back(std::move(row));
                }
            } else {
                const auto res = coverage_experiment(c, overrides.run);
                for (auto p : c.pivots) {
                    const auto& pc = res.per_pivot.at(p);
                    auto row = base_row(p, res.q_min, res.q_max);
                    row.insert(row.end(), {fmt(pc.coverage()), fmt(pc.std_error()),
                                           fmt(res.degenerate_rate()), fmt(pc.nonpositive_rate()),
                                           std::to_string(c.master_seed)});
                    if (pc.valid == 0) run.all_cells_completed = false;
                    run.rows.push_back(std::move(row));
                }
            }
        } catch (const Error&) {
            run.all_cells_completed = false;
        }
    }
    return run;
}

}  // namespace lmpivot
