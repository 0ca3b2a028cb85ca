#include <benchmark/benchmark.h>

#include "modq/analytic.hpp"
#include "modq/chain.hpp"
#include "modq/sim.hpp"
#include "modq/sweep.hpp"

namespace {

const modq::ModelParams kModel{7.5, 1.0, {5.0, 2.5, 3.75}};

void BM_TailRoot(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(modq::tail_root(kModel.mo, kModel.lambda));
}
BENCHMARK(BM_TailRoot);

void BM_SolveHet(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(modq::solve_het(kModel));
}
BENCHMARK(BM_SolveHet);

void BM_SolveTruncated(benchmark::State& state) {
    const auto g = modq::build_het(kModel, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(modq::solve_truncated(g));
}
BENCHMARK(BM_SolveTruncated)->Arg(60)->Arg(240)->Arg(960);

void BM_Simulate(benchmark::State& state) {
    const modq::SimConfig cfg{kModel, double(state.range(0)), 0.0, 1, 7};
    for (auto _ : state) benchmark::DoNotOptimize(modq::simulate(cfg));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Simulate)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_SweepHom(benchmark::State& state) {
    modq::SweepConfig cfg;
    cfg.rho = 0.5;
    cfg.grid_n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(modq::sweep_hom(cfg));
}
BENCHMARK(BM_SweepHom)->Arg(151);

}  // namespace

BENCHMARK_MAIN();
