#include <benchmark/benchmark.h>

#include "lmpivot/acvf.hpp"
#include "lmpivot/mc_harness.hpp"
#include "lmpivot/memory_est.hpp"
#include "lmpivot/pivots.hpp"
#include "lmpivot/process_gen.hpp"
#include "lmpivot/rand_weights.hpp"

using namespace lmpivot;

static void BM_SimulateFarima(benchmark::State& state) {
    ProcessSpec spec;
    spec.model = Farima{0.3};
    const auto n = static_cast<std::size_t>(state.range(0));
    const Simulator sim(spec, n);
    RngStream rng(1);
    for (auto _ : state) benchmark::DoNotOptimize(sim(rng));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateFarima)->Arg(300)->Arg(1000)->Arg(4096)->Unit(benchmark::kMicrosecond);

static void BM_DrawWeights(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    RngStream rng(2);
    for (auto _ : state) benchmark::DoNotOptimize(draw_weights(n, rng));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DrawWeights)->Arg(30)->Arg(400)->Arg(4096);

static void BM_GnStu(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    ProcessSpec spec;
    spec.model = MA1{-0.5};
    RngStream rng(3);
    const auto x = simulate(spec, n, rng);
    auto w = draw_weights(n, rng);
    const auto q = bandwidth_q(n, 0.0);
    for (auto _ : state) benchmark::DoNotOptimize(g_n_stu(x, w, q, 0.0, 0.0));
}
BENCHMARK(BM_GnStu)->Arg(30)->Arg(400)->Arg(4096);

static void BM_LocalWhittle(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    ProcessSpec spec;
    spec.model = Farima{0.2};
    RngStream rng(4);
    const auto x = simulate(spec, n, rng);
    const auto m = default_whittle_bandwidth(n);
    for (auto _ : state) benchmark::DoNotOptimize(local_whittle(x, m));
}
BENCHMARK(BM_LocalWhittle)->Arg(300)->Arg(4096)->Unit(benchmark::kMicrosecond);

static void BM_CoverageTable1Cell(benchmark::State& state) {
    ExperimentConfig cfg;
    cfg.spec.model = MA1{-0.5};
    cfg.n = 30;
    cfg.reps = 1000;
    cfg.master_seed = 42;
    for (auto _ : state) benchmark::DoNotOptimize(coverage_experiment(cfg, {1}));
}
BENCHMARK(BM_CoverageTable1Cell)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
