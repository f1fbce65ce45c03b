#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lmpivot/process_gen.hpp"

namespace lmpivot {

/// How the memory parameter entering the studentizers is obtained.
enum class DMode {
    KnownZero,   ///< d = 0
    KnownD,      ///< the model's true d (0 for short memory)
    EstimatedD,  ///< local Whittle estimate from each replication's own data
};

/// Pivots the harness can score.
enum class HarnessPivot { GStu, TStu, TStar, TStarStu };

std::string d_mode_name(DMode mode);
std::string harness_pivot_name(HarnessPivot pivot);

struct ExperimentConfig {
    ProcessSpec spec;
    std::size_t n = 30;
    std::size_t reps = 1000;
    double nominal = 0.95;
    DMode d_mode = DMode::KnownZero;
    std::optional<std::size_t> q_override;
    std::optional<std::size_t> whittle_m;
    std::vector<HarnessPivot> pivots{HarnessPivot::GStu, HarnessPivot::TStu};
    std::uint64_t master_seed = 0;
    /// Second coordinate of the stream address (master, experiment, [outer,] rep, purpose).
    std::uint64_t experiment_id = 0;
    /// Outer coverage estimates for proportion experiments; reps is the inner count.
    std::size_t outer_reps = 500;
};

/// Throws ParameterDomainError for an unusable configuration.
void validate(const ExperimentConfig& cfg);

struct RunOptions {
    /// Worker threads; 0 selects std::thread::hardware_concurrency().
    unsigned threads = 0;
};

struct PivotCoverage {
    std::size_t hits = 0;
    std::size_t valid = 0;
    std::size_t nonpositive = 0;  ///< replications dropped for a nonpositive studentizer
    std::size_t attempted = 0;

    [[nodiscard]] double coverage() const noexcept;
    /// Binomial standard error sqrt(p(1-p)/valid).
    [[nodiscard]] double std_error() const noexcept;
    [[nodiscard]] double nonpositive_rate() const noexcept;
};

struct SeedLineage {
    std::uint64_t master_seed = 0;
    std::uint64_t experiment_id = 0;
    std::string scheme;
};

struct CoverageResult {
    std::map<HarnessPivot, PivotCoverage> per_pivot;
    std::size_t reps = 0;
    std::size_t weight_draws = 0;
    std::size_t degenerate_draws = 0;
    std::size_t failed_reps = 0;  ///< no usable weights after 100 draws, or estimator failure
    std::size_t q_min = 0;
    std::size_t q_max = 0;
    double mean_d_used = 0.0;
    std::chrono::duration<double> wall_time{0.0};
    SeedLineage seed_lineage;

    [[nodiscard]] double coverage(HarnessPivot p) const { return per_pivot.at(p).coverage(); }
    /// degenerate_draws / weight_draws
    [[nodiscard]] double degenerate_rate() const noexcept;
    /// Pooled over the requested pivots.
    [[nodiscard]] double nonpositive_rate() const noexcept;
};

struct ProportionResult {
    std::map<HarnessPivot, double> prop;
    std::map<HarnessPivot, std::vector<double>> outer_coverages;
    std::size_t outer = 0;
    std::size_t inner = 0;
    /// Counters pooled over every inner replication of every outer run.
    std::map<HarnessPivot, PivotCoverage> pooled;
    std::size_t weight_draws = 0;
    std::size_t degenerate_draws = 0;
    std::size_t failed_reps = 0;
    std::size_t q_min = 0;
    std::size_t q_max = 0;
    std::chrono::duration<double> wall_time{0.0};
    SeedLineage seed_lineage;

    [[nodiscard]] double degenerate_rate() const noexcept;
};

inline constexpr std::size_t kMaxWeightRedraws = 100;
/// A coverage value v counts toward the proportion when |v - nominal| <= this.
inline constexpr double kProportionBand = 0.01;

CoverageResult coverage_experiment(const ExperimentConfig& cfg, const RunOptions& opts = {});

ProportionResult proportion_experiment(const ExperimentConfig& cfg, const RunOptions& opts = {});

/// One (model, innovation, n) cell of a bundled table.
struct TableCell {
    ExperimentConfig config;
    bool proportion = false;
};

struct TableOverrides {
    double scale = 1.0;
    std::uint64_t master_seed = 0;
    std::optional<std::size_t> q_override;
    std::optional<std::size_t> whittle_m;
    RunOptions run;
};

/// Configurations behind coverage tables 1-6 and proportion tables 7-12.
std::vector<TableCell> table_cells(int table_id, const TableOverrides& overrides = {});

inline const std::vector<std::string> kTableCsvColumns{
    "table", "model", "innovation", "n", "q", "d_mode", "pivot", "value",
    "stderr", "degenerate_rate", "nonpositive_rate", "seed"};

struct TableRun {
    /// Resolved configuration, written as the CSV comment header.
    std::vector<std::pair<std::string, std::string>> header;
    std::vector<std::vector<std::string>> rows;
    bool all_cells_completed = true;
};

/// Runs every cell of a table; one row per (cell, pivot).
TableRun run_table(int table_id, const TableOverrides& overrides = {});

}  // namespace lmpivot
