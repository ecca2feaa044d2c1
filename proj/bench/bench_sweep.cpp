// Serial reference vs OpenMP-parallel amplitude sweep. Both paths produce
// bit-identical cells (checked in unit tests); this only measures wall time.

#include <benchmark/benchmark.h>

#include <vector>

#include "supra/experiments.hpp"
#include "supra/stepper.hpp"

namespace {

supra::ChainConfig bench_config() {
  supra::ChainConfig cfg;
  cfg.t_final = 50.0;
  return cfg;
}

std::vector<double> grid(int cells) {
  std::vector<double> a;
  for (int i = 1; i <= cells; ++i) a.push_back(0.25 * i);
  return a;
}

void BM_SweepSerial(benchmark::State& state) {
  const supra::ChainConfig cfg = bench_config();
  const std::vector<double> amps = grid(static_cast<int>(state.range(0)));
  supra::ExperimentOptions opt;
  opt.workers = 1;
  for (auto _ : state) benchmark::DoNotOptimize(supra::amplitude_sweep(cfg, amps, opt));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(amps.size()));
}

void BM_SweepParallel(benchmark::State& state) {
  const supra::ChainConfig cfg = bench_config();
  const std::vector<double> amps = grid(static_cast<int>(state.range(0)));
  supra::ExperimentOptions opt;
  opt.workers = 0;
  for (auto _ : state) benchmark::DoNotOptimize(supra::amplitude_sweep(cfg, amps, opt));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(amps.size()));
}

// One implicit step at desk scale, for scale: a sweep cell is T/dt of these.
void BM_NewtonStep(benchmark::State& state) {
  supra::ChainConfig cfg;
  cfg.drive.amplitude = 1.5;
  supra::Stepper stepper(cfg);
  supra::ChainState s = stepper.initial_state();
  for (int k = 0; k < 1200; ++k) stepper.step(s);
  for (auto _ : state) {
    supra::ChainState copy = s;
    benchmark::DoNotOptimize(stepper.step(copy));
  }
}

}  // namespace

BENCHMARK(BM_SweepSerial)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SweepParallel)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_NewtonStep)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
