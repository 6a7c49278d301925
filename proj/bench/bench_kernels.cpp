// Serial reference vs OpenMP versions of the data-parallel kernels.
#include <benchmark/benchmark.h>

#include "hbl/bootstrap.hpp"
#include "hbl/bridge.hpp"
#include "hbl/simulation.hpp"

namespace {

hbl::Execution exec_for(const benchmark::State& state) {
  return state.range(0) == 0 ? hbl::Execution::serial() : hbl::Execution::omp();
}

hbl::EstimatePair sample_estimate(int y0) {
  hbl::Rng rng(7);
  const auto risk = hbl::generate_risk_path(y0, 1.0, 1.0, rng);
  const auto events = hbl::simulate_counting({hbl::Intensity::alpha1}, risk, rng);
  return hbl::nelson_aalen(events, risk);
}

void BM_BridgeSupSamples(benchmark::State& state) {
  const auto exec = exec_for(state);
  for (auto _ : state) {
    auto v = hbl::bridge_sup_samples(hbl::Weight::hw, 0.1, 0.9, 20000, 1000, 11, exec);
    benchmark::DoNotOptimize(v.data());
  }
}
BENCHMARK(BM_BridgeSupSamples)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_BridgeBank(benchmark::State& state) {
  const auto exec = exec_for(state);
  for (auto _ : state) {
    hbl::BridgeBank bank(10000, 1000, 13, exec);
    benchmark::DoNotOptimize(bank.paths());
  }
}
BENCHMARK(BM_BridgeBank)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_BootstrapStatistics(benchmark::State& state) {
  const auto exec = exec_for(state);
  const auto est = sample_estimate(200);
  const hbl::TimeInterval s(0.2, 0.8);
  for (auto _ : state) {
    auto v = hbl::bootstrap_sup_statistics(est, s, 5000, 17, hbl::Studentization::replicate, exec);
    benchmark::DoNotOptimize(v.data());
  }
}
BENCHMARK(BM_BootstrapStatistics)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_CoverageCell(benchmark::State& state) {
  const auto exec = exec_for(state);
  hbl::ExperimentConfig config;
  config.alphas = {hbl::Intensity::alpha1};
  config.y0_values = {50};
  config.iterations = 200;
  for (auto _ : state) {
    auto table = hbl::coverage_experiment(config, exec);
    benchmark::DoNotOptimize(table.rows.data());
  }
}
BENCHMARK(BM_CoverageCell)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
