#include "lmpivot_cli/cli.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <sstream>

#include "header_config.hpp"
#include "lmpivot/acvf.hpp"
#include "lmpivot/csv.hpp"
#include "lmpivot/errors.hpp"
#include "lmpivot/intervals.hpp"
#include "lmpivot/mc_harness.hpp"
#include "lmpivot/memory_est.hpp"
#include "lmpivot/pivots.hpp"
#include "lmpivot/process_gen.hpp"
#include "lmpivot/rand_weights.hpp"

namespace lmpivot::cli {

namespace {

using Header = std::vector<std::pair<std::string, std::string>>;

enum class ModelKind { MA1, AR1, Farima };

struct Options {
    // process
    ModelKind model = ModelKind::MA1;
    double theta = -0.5;
    double phi = 0.5;
    double d = 0.2;
    double mu = 0.0;
    InnovationKind innovations = InnovationKind::GaussianStd;
    std::optional<std::size_t> truncation;
    std::size_t n = 30;
    // data input
    std::string in;
    std::string column = "x";
    // inference
    DMode d_mode = DMode::KnownZero;
    double alpha = 0.05;
    std::optional<std::size_t> q;
    std::optional<std::size_t> m;
    std::vector<std::string> pivots;
    // experiments
    std::size_t reps = 1000;
    std::size_t outer = 500;
    double nominal = 0.95;
    int table = 0;
    double scale = 1.0;
    // run
    std::optional<std::uint64_t> seed;
    unsigned threads = 0;
    std::string out;
};

const std::map<std::string, ModelKind> kModels{
    {"ma1", ModelKind::MA1}, {"ar1", ModelKind::AR1}, {"farima", ModelKind::Farima}};
const std::map<std::string, InnovationKind> kInnovations{
    {"gaussian", InnovationKind::GaussianStd}, {"lognormal", InnovationKind::LognormalStd}};
const std::map<std::string, DMode> kDModes{{"known-zero", DMode::KnownZero},
                                           {"known-d", DMode::KnownD},
                                           {"estimate", DMode::EstimatedD},
                                           {"estimated-d", DMode::EstimatedD}};
const std::map<std::string, HarnessPivot> kHarnessPivots{{"gstu", HarnessPivot::GStu},
                                                         {"tstu", HarnessPivot::TStu},
                                                         {"tstar", HarnessPivot::TStar},
                                                         {"tstar-stu", HarnessPivot::TStarStu}};

template <class Map, class V>
std::string name_of(const Map& m, V v) {
    for (const auto& [k, val] : m)
        if (val == v) return k;
    return "?";
}

std::string d_mode_flag(DMode mode) {
    switch (mode) {
        case DMode::KnownZero: return "known-zero";
        case DMode::KnownD: return "known-d";
        case DMode::EstimatedD: return "estimate";
    }
    return "?";
}

std::string fmt(double v) { return csv::format_double(v); }

ProcessSpec make_spec(const Options& o) {
    ProcessSpec spec;
    switch (o.model) {
        case ModelKind::MA1: spec.model = MA1{o.theta}; break;
        case ModelKind::AR1: spec.model = AR1{o.phi}; break;
        case ModelKind::Farima: spec.model = Farima{o.d}; break;
    }
    spec.mu = o.mu;
    spec.innovations = o.innovations;
    spec.truncation_K = o.truncation;
    validate(spec);
    return spec;
}

void add_process_header(Header& h, const Options& o) {
    h.emplace_back("model", name_of(kModels, o.model));
    switch (o.model) {
        case ModelKind::MA1: h.emplace_back("theta", fmt(o.theta)); break;
        case ModelKind::AR1: h.emplace_back("phi", fmt(o.phi)); break;
        case ModelKind::Farima: h.emplace_back("d", fmt(o.d)); break;
    }
    h.emplace_back("mu", fmt(o.mu));
    h.emplace_back("innovations", name_of(kInnovations, o.innovations));
    if (o.truncation) h.emplace_back("K", std::to_string(*o.truncation));
    h.emplace_back("n", std::to_string(o.n));
}

void add_inference_header(Header& h, const Options& o) {
    h.emplace_back("d-mode", d_mode_flag(o.d_mode));
    if (o.d_mode == DMode::KnownD) h.emplace_back("d", fmt(o.d));
    if (o.q) h.emplace_back("q", std::to_string(*o.q));
    if (o.m) h.emplace_back("m", std::to_string(*o.m));
}

std::vector<double> load_series(const Options& o) {
    if (o.in.empty()) throw ParameterDomainError("--in is required");
    std::ifstream f(o.in, std::ios::binary);
    if (!f) throw ParameterDomainError("cannot open input file " + o.in);
    return csv::read_series(f, o.column);
}

double resolve_d(const Options& o, std::span<const double> x, std::size_t& m_used) {
    switch (o.d_mode) {
        case DMode::KnownZero: return 0.0;
        case DMode::KnownD:
            if (!(o.d >= 0.0 && o.d < 0.5)) throw ParameterDomainError("--d must lie in [0, 0.5)");
            return o.d;
        case DMode::EstimatedD: {
            m_used = o.m.value_or(default_whittle_bandwidth(x.size()));
            return local_whittle(x, m_used).d_hat;
        }
    }
    return 0.0;
}

WeightVector draw_usable_weights(std::size_t n, std::uint64_t seed) {
    auto rng = RngStream::derive(seed, {0}).child(StreamPurpose::Weights);
    for (std::size_t i = 0; i < kMaxWeightRedraws; ++i) {
        auto w = draw_weights(n, rng);
        if (!w.is_degenerate()) return w;
    }
    throw DegenerateWeights();
}

std::vector<HarnessPivot> harness_pivots(const Options& o) {
    if (o.pivots.empty()) return {HarnessPivot::GStu, HarnessPivot::TStu};
    std::vector<HarnessPivot> out;
    for (const auto& p : o.pivots) out.push_back(kHarnessPivots.at(p));
    return out;
}

ExperimentConfig experiment_config(const Options& o, std::uint64_t seed) {
    ExperimentConfig cfg;
    cfg.spec = make_spec(o);
    cfg.n = o.n;
    cfg.reps = o.reps;
    cfg.nominal = o.nominal;
    cfg.d_mode = o.d_mode;
    cfg.q_override = o.q;
    cfg.whittle_m = o.m;
    cfg.pivots = harness_pivots(o);
    cfg.master_seed = seed;
    cfg.outer_reps = o.outer;
    return cfg;
}

void add_experiment_header(Header& h, const Options& o, const ExperimentConfig& cfg) {
    add_process_header(h, o);
    h.emplace_back("reps", std::to_string(cfg.reps));
    h.emplace_back("nominal", fmt(cfg.nominal));
    h.emplace_back("d-mode", d_mode_flag(o.d_mode));
    if (o.q) h.emplace_back("q", std::to_string(*o.q));
    if (o.m) h.emplace_back("m", std::to_string(*o.m));
    std::string names;
    for (auto p : cfg.pivots) names += (names.empty() ? "" : ",") + name_of(kHarnessPivots, p);
    h.emplace_back("pivots", names);
}

std::string q_range(std::size_t lo, std::size_t hi) {
    return lo == hi ? std::to_string(lo) : std::to_string(lo) + "-" + std::to_string(hi);
}

struct Output {
    Header header;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    int status = kExitOk;
};

Output cmd_generate(const Options& o, std::uint64_t seed) {
    Output r;
    const auto spec = make_spec(o);
    add_process_header(r.header, o);
    auto rng = RngStream::derive(seed, {0}).child(StreamPurpose::Data);
    const auto x = simulate(spec, o.n, rng);
    r.columns = {"x"};
    for (double v : x) r.rows.push_back({fmt(v)});
    return r;
}

Output cmd_estimate_d(const Options& o) {
    Output r;
    const auto x = load_series(o);
    const auto m = o.m.value_or(default_whittle_bandwidth(x.size()));
    r.header.emplace_back("in", o.in);
    r.header.emplace_back("column", o.column);
    r.header.emplace_back("m", std::to_string(m));
    const auto est = local_whittle(x, m);
    r.columns = {"d_hat", "m", "n"};
    r.rows.push_back({fmt(est.d_hat), std::to_string(est.m), std::to_string(x.size())});
    return r;
}

Output cmd_ci(const Options& o, std::uint64_t seed) {
    if (!(o.alpha > 0.0 && o.alpha < 1.0)) throw ParameterDomainError("--alpha must lie in (0, 1)");
    Output r;
    const auto x = load_series(o);
    if (x.size() < 8) throw ParameterDomainError("input series needs at least 8 values");
    std::size_t m_used = 0;
    const double d = resolve_d(o, x, m_used);
    const std::size_t q = o.q.value_or(bandwidth_q(x.size(), d));
    const auto w = draw_usable_weights(x.size(), seed);
    const auto ci = ci_mean(x, w, q, d, o.alpha);

    char z[32];
    std::snprintf(z, sizeof z, "%.6f", z_quantile(1.0 - o.alpha / 2.0));
    r.header.emplace_back("in", o.in);
    r.header.emplace_back("column", o.column);
    r.header.emplace_back("alpha", fmt(o.alpha));
    add_inference_header(r.header, o);
    r.header.emplace_back("z", z);
    r.columns = {"lower", "upper", "midpoint", "halfwidth", "d", "q", "m", "n", "method"};
    r.rows.push_back({fmt(ci.lower), fmt(ci.upper), fmt(ci.midpoint()), fmt(ci.halfwidth()), fmt(d),
                      std::to_string(q), m_used ? std::to_string(m_used) : "", std::to_string(x.size()),
                      ci.method == IntervalMethod::GStuLong ? "GStuLong" : "GStuShort"});
    return r;
}

Output cmd_pivot(const Options& o, std::uint64_t seed) {
    Output r;
    const auto x = load_series(o);
    if (x.size() < 8) throw ParameterDomainError("input series needs at least 8 values");
    std::size_t m_used = 0;
    const double d = resolve_d(o, x, m_used);
    const std::size_t q = o.q.value_or(bandwidth_q(x.size(), d));
    const auto w = draw_usable_weights(x.size(), seed);

    r.header.emplace_back("in", o.in);
    r.header.emplace_back("column", o.column);
    r.header.emplace_back("mu", fmt(o.mu));
    add_inference_header(r.header, o);
    r.columns = {"pivot", "value", "d", "q"};
    for (auto p : harness_pivots(o)) {
        double v = 0.0;
        switch (p) {
            case HarnessPivot::GStu: v = g_n_stu(x, w, q, d, o.mu).value; break;
            case HarnessPivot::TStu: v = t_n_stu(x, q, d, o.mu).value; break;
            case HarnessPivot::TStarStu: v = t_star_stu(x, w).value; break;
            case HarnessPivot::TStar:
                throw ParameterDomainError("tstar needs theoretical autocovariances; use tstar-stu");
        }
        r.rows.push_back({name_of(kHarnessPivots, p), fmt(v), fmt(d), std::to_string(q)});
    }
    return r;
}

Output cmd_coverage(const Options& o, std::uint64_t seed) {
    Output r;
    const auto cfg = experiment_config(o, seed);
    add_experiment_header(r.header, o, cfg);
    const auto res = coverage_experiment(cfg, {o.threads});
    r.columns = {"pivot", "coverage", "stderr", "hits", "valid", "nonpositive", "failed",
                 "degenerate_rate", "q", "mean_d"};
    for (auto p : cfg.pivots) {
        const auto& c = res.per_pivot.at(p);
        r.rows.push_back({name_of(kHarnessPivots, p), fmt(c.coverage()), fmt(c.std_error()),
                          std::to_string(c.hits), std::to_string(c.valid), std::to_string(c.nonpositive),
                          std::to_string(res.failed_reps), fmt(res.degenerate_rate()),
                          q_range(res.q_min, res.q_max), fmt(res.mean_d_used)});
    }
    if (res.failed_reps == cfg.reps) r.status = kExitNumeric;
    return r;
}

Output cmd_proportion(const Options& o, std::uint64_t seed) {
    Output r;
    const auto cfg = experiment_config(o, seed);
    add_experiment_header(r.header, o, cfg);
    r.header.emplace_back("outer", std::to_string(cfg.outer_reps));
    const auto res = proportion_experiment(cfg, {o.threads});
    r.columns = {"pivot", "prop", "pooled_coverage", "nonpositive_rate", "degenerate_rate", "failed", "q"};
    for (auto p : cfg.pivots) {
        const auto& c = res.pooled.at(p);
        r.rows.push_back({name_of(kHarnessPivots, p), fmt(res.prop.at(p)), fmt(c.coverage()),
                          fmt(c.nonpositive_rate()), fmt(res.degenerate_rate()),
                          std::to_string(res.failed_reps), q_range(res.q_min, res.q_max)});
    }
    return r;
}

Output cmd_reproduce(const Options& o, std::uint64_t seed) {
    if (o.table < 1 || o.table > 12) throw ParameterDomainError("--table must lie in 1..12");
    if (!(o.scale > 0.0)) throw ParameterDomainError("--scale must be positive");
    Output r;
    TableOverrides ov;
    ov.scale = o.scale;
    ov.master_seed = seed;
    ov.q_override = o.q;
    ov.whittle_m = o.m;
    ov.run.threads = o.threads;
    auto run = run_table(o.table, ov);
    r.header.emplace_back("scale", fmt(o.scale));
    if (o.q) r.header.emplace_back("q", std::to_string(*o.q));
    if (o.m) r.header.emplace_back("m", std::to_string(*o.m));
    for (auto& kv : run.header)
        if (kv.first != "command" && kv.first != "seed" && kv.first != "scale") r.header.push_back(kv);
    r.columns = kTableCsvColumns;
    r.rows = std::move(run.rows);
    if (!run.all_cells_completed) r.status = kExitNumeric;
    return r;
}

void write_output(std::ostream& os, const std::string& command, std::uint64_t seed, const Output& r) {
    Header h{{"command", command}, {"seed", std::to_string(seed)}};
    h.insert(h.end(), r.header.begin(), r.header.end());
    csv::write_header_comments(os, h);
    csv::write_row(os, r.columns);
    for (const auto& row : r.rows) csv::write_row(os, row);
}

void register_options(CLI::App& app, Options& o) {
    app.add_option("--model", o.model, "Process model")
        ->transform(CLI::CheckedTransformer(kModels, CLI::ignore_case));
    app.add_option("--theta", o.theta, "MA(1) coefficient")->capture_default_str();
    app.add_option("--phi", o.phi, "AR(1) coefficient")->capture_default_str();
    app.add_option("--d", o.d, "FARIMA memory parameter, or the known d for inference")
        ->capture_default_str();
    app.add_option("--mu", o.mu, "Process mean, or the hypothesised mean for pivot")
        ->capture_default_str();
    app.add_option("--innovations", o.innovations, "Innovation law")
        ->transform(CLI::CheckedTransformer(kInnovations, CLI::ignore_case));
    app.add_option("--K", o.truncation, "FARIMA MA truncation (default max(1e4, 50n))");
    app.add_option("--n", o.n, "Sample size")->capture_default_str();
    app.add_option("--in", o.in, "Input CSV");
    app.add_option("--column", o.column, "Input column")->capture_default_str();
    app.add_option("--d-mode", o.d_mode, "known-zero, known-d or estimate")
        ->transform(CLI::CheckedTransformer(kDModes, CLI::ignore_case));
    app.add_option("--alpha", o.alpha, "Interval level is 1 - alpha")->capture_default_str();
    app.add_option("--q", o.q, "Bandwidth override");
    app.add_option("--m", o.m, "Local Whittle frequencies (default round(n^0.65))");
    app.add_option("--pivots", o.pivots, "Pivots: gstu, tstu, tstar, tstar-stu")
        ->delimiter(',')
        ->check(CLI::IsMember({"gstu", "tstu", "tstar", "tstar-stu"}));
    app.add_option("--reps", o.reps, "Replications (inner count for proportion)")->capture_default_str();
    app.add_option("--outer", o.outer, "Outer coverage estimates for proportion")->capture_default_str();
    app.add_option("--nominal", o.nominal, "Nominal coverage")->capture_default_str();
    app.add_option("--table", o.table, "Table id 1..12");
    app.add_option("--scale", o.scale, "Replication scale factor")->capture_default_str();
    app.add_option("--seed", o.seed, "Master seed (drawn from entropy when absent)");
    app.add_option("--threads", o.threads, "Worker threads, 0 = all cores")->capture_default_str();
    app.add_option("--out", o.out, "Output file (stdout when absent)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Randomized pivots for the mean of long and short memory series", "lmpivot"};
    app.fallthrough();
    app.require_subcommand(1);
    app.config_formatter(std::make_shared<HeaderConfig>());
    app.set_config("--config", "", "key=value file; output headers are accepted too");
    app.allow_config_extras(CLI::config_extras_mode::ignore);

    Options o;
    register_options(app, o);
    auto* generate = app.add_subcommand("generate", "Simulate a series to CSV");
    auto* estimate = app.add_subcommand("estimate-d", "Local Whittle estimate of d");
    auto* ci = app.add_subcommand("ci", "Randomized confidence interval for the mean");
    auto* pivot = app.add_subcommand("pivot", "Evaluate pivots on a series");
    auto* coverage = app.add_subcommand("coverage", "Monte Carlo coverage experiment");
    auto* proportion = app.add_subcommand("proportion", "Proportion-of-coverages experiment");
    auto* reproduce = app.add_subcommand("reproduce", "Reproduce a bundled table");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    std::uint64_t seed = 0;
    if (o.seed) {
        seed = *o.seed;
    } else {
        std::random_device rd;
        seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
        err << "seed=" << seed << '\n';
    }

    std::string command;
    try {
        Output r;
        if (*generate) {
            command = "generate";
            r = cmd_generate(o, seed);
        } else if (*estimate) {
            command = "estimate-d";
            r = cmd_estimate_d(o);
        } else if (*ci) {
            command = "ci";
            r = cmd_ci(o, seed);
        } else if (*pivot) {
            command = "pivot";
            r = cmd_pivot(o, seed);
        } else if (*coverage) {
            command = "coverage";
            r = cmd_coverage(o, seed);
        } else if (*proportion) {
            command = "proportion";
            r = cmd_proportion(o, seed);
        } else if (*reproduce) {
            command = "reproduce";
            r = cmd_reproduce(o, seed);
        }
        if (o.out.empty()) {
            write_output(out, command, seed, r);
        } else {
            std::ofstream f(o.out, std::ios::binary | std::ios::trunc);
            if (!f) throw ParameterDomainError("cannot open output file " + o.out);
            write_output(f, command, seed, r);
        }
        if (r.status != kExitOk) err << "error: " << command << " did not complete every replication\n";
        return r.status;
    } catch (const NumericError& e) {
        err << "error: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const DegenerateWeights& e) {
        err << "error: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}

}  // namespace lmpivot::cli
