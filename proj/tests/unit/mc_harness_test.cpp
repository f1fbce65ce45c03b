#include <gtest/gtest.h>

#include <cmath>

#include "lmpivot/acvf.hpp"
#include "lmpivot/errors.hpp"
#include "lmpivot/mc_harness.hpp"

using namespace lmpivot;

namespace {

ExperimentConfig ma1_config(std::size_t n, std::size_t reps) {
    ExperimentConfig cfg;
    cfg.spec.model = MA1{-0.5};
    cfg.n = n;
    cfg.reps = reps;
    cfg.master_seed = 42;
    cfg.experiment_id = 1;
    return cfg;
}

void expect_same(const CoverageResult& a, const CoverageResult& b) {
    ASSERT_EQ(a.per_pivot.size(), b.per_pivot.size());
    for (const auto& [p, c] : a.per_pivot) {
        const auto& o = b.per_pivot.at(p);
        EXPECT_EQ(c.hits, o.hits);
        EXPECT_EQ(c.valid, o.valid);
        EXPECT_EQ(c.nonpositive, o.nonpositive);
    }
    EXPECT_EQ(a.weight_draws, b.weight_draws);
    EXPECT_EQ(a.degenerate_draws, b.degenerate_draws);
    EXPECT_EQ(a.mean_d_used, b.mean_d_used);
}

}  // namespace

TEST(Harness, ValidateRejectsBadConfigs) {
    auto cfg = ma1_config(30, 10);
    cfg.reps = 0;
    EXPECT_THROW(validate(cfg), ParameterDomainError);
    cfg = ma1_config(30, 10);
    cfg.nominal = 1.0;
    EXPECT_THROW(validate(cfg), ParameterDomainError);
    cfg = ma1_config(30, 10);
    cfg.pivots.clear();
    EXPECT_THROW(validate(cfg), ParameterDomainError);
    cfg = ma1_config(30, 10);
    cfg.q_override = 30;
    EXPECT_THROW(validate(cfg), ParameterDomainError);
    cfg = ma1_config(5, 10);
    EXPECT_THROW(validate(cfg), ParameterDomainError);
    cfg.q_override = 1;
    EXPECT_NO_THROW(validate(cfg));
    cfg = ma1_config(20, 10);
    cfg.d_mode = DMode::EstimatedD;
    EXPECT_THROW(validate(cfg), ParameterDomainError);
    cfg.spec.model = AR1{1.5};
    EXPECT_THROW(coverage_experiment(cfg), ParameterDomainError);
}

TEST(Harness, DeterministicAcrossRunsAndThreads) {
    auto cfg = ma1_config(40, 300);
    cfg.pivots = {HarnessPivot::GStu, HarnessPivot::TStu, HarnessPivot::TStar, HarnessPivot::TStarStu};
    const auto a = coverage_experiment(cfg, {1});
    const auto b = coverage_experiment(cfg, {1});
    const auto c = coverage_experiment(cfg, {4});
    expect_same(a, b);
    expect_same(a, c);
    cfg.master_seed = 43;
    const auto d = coverage_experiment(cfg, {1});
    EXPECT_NE(a.per_pivot.at(HarnessPivot::GStu).hits + 1000 * a.per_pivot.at(HarnessPivot::TStu).hits,
              d.per_pivot.at(HarnessPivot::GStu).hits + 1000 * d.per_pivot.at(HarnessPivot::TStu).hits);
}

TEST(Harness, CountersAreConsistent) {
    auto cfg = ma1_config(20, 500);
    cfg.spec.model = MA1{-0.9};
    cfg.q_override = 4;
    const auto r = coverage_experiment(cfg, {1});
    for (const auto& [p, c] : r.per_pivot) {
        EXPECT_EQ(c.attempted, cfg.reps - r.failed_reps);
        EXPECT_EQ(c.valid + c.nonpositive, c.attempted);
        EXPECT_LE(c.hits, c.valid);
    }
    EXPECT_GE(r.weight_draws, cfg.reps);
    EXPECT_EQ(r.q_min, 4u);
    EXPECT_EQ(r.q_max, 4u);
    EXPECT_EQ(r.seed_lineage.master_seed, 42u);
}

TEST(Harness, DegenerateRateAtFive) {
    auto cfg = ma1_config(5, 100000);
    cfg.q_override = 1;
    cfg.pivots = {HarnessPivot::TStarStu};
    const auto r = coverage_experiment(cfg, {1});
    const double p = 120.0 / 3125.0;
    EXPECT_NEAR(r.degenerate_rate(), p, 3.0 * std::sqrt(p * (1 - p) / double(r.weight_draws)));
    EXPECT_EQ(r.failed_reps, 0u);
}

TEST(Harness, KnownDUsesModelParameter) {
    ExperimentConfig cfg;
    cfg.spec.model = Farima{0.2};
    cfg.n = 50;
    cfg.reps = 20;
    cfg.d_mode = DMode::KnownD;
    const auto r = coverage_experiment(cfg, {1});
    EXPECT_DOUBLE_EQ(r.mean_d_used, 0.2);
    EXPECT_EQ(r.q_min, bandwidth_q(50, 0.2));
}

TEST(Harness, EstimatedDVariesQ) {
    ExperimentConfig cfg;
    cfg.spec.model = Farima{0.4};
    cfg.n = 300;
    cfg.reps = 50;
    cfg.d_mode = DMode::EstimatedD;
    const auto r = coverage_experiment(cfg, {1});
    EXPECT_GT(r.mean_d_used, 0.0);
    EXPECT_LE(r.q_min, r.q_max);
}

TEST(Harness, ProportionWithSingleInnerRepIsZeroOrOne) {
    auto cfg = ma1_config(30, 1);
    cfg.outer_reps = 1;
    const auto r = proportion_experiment(cfg, {1});
    for (const auto& [p, v] : r.prop) EXPECT_TRUE(v == 0.0 || v == 1.0);
    EXPECT_EQ(r.outer, 1u);
    EXPECT_EQ(r.inner, 1u);
}

TEST(Harness, ProportionCountsBand) {
    auto cfg = ma1_config(30, 40);
    cfg.outer_reps = 30;
    const auto r = proportion_experiment(cfg, {1});
    for (const auto& [p, covs] : r.outer_coverages) {
        ASSERT_EQ(covs.size(), 30u);
        std::size_t in = 0;
        for (double v : covs) in += std::abs(v - 0.95) <= kProportionBand + 1e-12;
        EXPECT_DOUBLE_EQ(r.prop.at(p), double(in) / 30.0);
    }
    const auto again = proportion_experiment(cfg, {3});
    EXPECT_EQ(r.outer_coverages, again.outer_coverages);
}

TEST(Tables, CellLayout) {
    const auto t1 = table_cells(1);
    ASSERT_EQ(t1.size(), 2u);
    EXPECT_EQ(t1[0].config.n, 20u);
    EXPECT_EQ(t1[1].config.n, 30u);
    EXPECT_FALSE(t1[0].proportion);
    const auto t5 = table_cells(5);
    ASSERT_EQ(t5.size(), 2u);
    EXPECT_EQ(t5[0].config.n, 300u);
    EXPECT_EQ(std::get<Farima>(t5[0].config.spec.model).d, 0.4);
    EXPECT_TRUE(table_cells(9)[0].proportion);
    EXPECT_EQ(table_cells(9)[0].config.spec.innovations, InnovationKind::LognormalStd);
    EXPECT_THROW(table_cells(0), ParameterDomainError);
    EXPECT_THROW(table_cells(13), ParameterDomainError);
    TableOverrides ov;
    ov.scale = 0.1;
    EXPECT_EQ(table_cells(1, ov)[0].config.reps, 100u);
}

TEST(Tables, RunTableIsReproducible) {
    TableOverrides ov;
    ov.scale = 0.05;
    ov.master_seed = 42;
    ov.run.threads = 1;
    const auto a = run_table(1, ov);
    ov.run.threads = 2;
    const auto b = run_table(1, ov);
    ASSERT_EQ(a.rows.size(), 4u);
    for (const auto& row : a.rows) EXPECT_EQ(row.size(), kTableCsvColumns.size());
    EXPECT_EQ(a.rows, b.rows);
    EXPECT_EQ(a.header, b.header);
    EXPECT_TRUE(a.all_cells_completed);
}
