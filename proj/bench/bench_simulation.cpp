// Serial reference vs the OpenMP trial loop, plus the per-draw oracle kernel.

#include <benchmark/benchmark.h>

#include "bicbf/gprior.hpp"
#include "bicbf/simulation.hpp"

namespace {

bicbf::SimulationConfig bench_config() {
    bicbf::SimulationConfig c;
    c.cell_n = 50;
    c.g = 0.05;
    c.trials = 64;
    c.oracle.mc_samples = 2000;
    return c;
}

void BM_SimulationSerial(benchmark::State& state) {
    const auto c = bench_config();
    for (auto _ : state) benchmark::DoNotOptimize(bicbf::run_simulation_serial(c));
    state.SetItemsProcessed(state.iterations() * c.trials);
}
BENCHMARK(BM_SimulationSerial)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_SimulationParallel(benchmark::State& state) {
    const auto c = bench_config();
    bicbf::RunOptions opts;
    opts.threads = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(bicbf::run_simulation(c, opts));
    state.SetItemsProcessed(state.iterations() * c.trials);
}
BENCHMARK(BM_SimulationParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_ConditionalBf(benchmark::State& state) {
    const auto c = bench_config();
    const auto data = bicbf::generate_dataset(c, 0);
    const bicbf::EffectDesign design(data, bicbf::kEffects);
    const double g[] = {0.3, 0.7, 1.1};
    for (auto _ : state) benchmark::DoNotOptimize(bicbf::conditional_log_bf10(design, g));
}
BENCHMARK(BM_ConditionalBf);

}  // namespace

BENCHMARK_MAIN();
