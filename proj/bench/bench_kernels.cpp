// Serial reference vs OpenMP kernels. Both paths produce identical results;
// only wall time differs. Set OMP_NUM_THREADS to vary the thread count.

#include <benchmark/benchmark.h>

#include "refcast/class_stats.h"
#include "refcast/engine.h"
#include "refcast/sample_data.h"
#include "refcast/selection_sim.h"

using namespace refcast;

namespace {

SimConfig rail_bias_config(std::size_t trials) {
  const auto ds = make_sample_dataset();
  ClassCriteria cost, traffic;
  cost.project_type = traffic.project_type = ProjectType::rail;
  traffic.measure = Measure::traffic_inaccuracy;
  SimConfig c;
  c.cost_bias = EmpiricalBias{"rail cost", build_reference_class(ds, cost).sample};
  c.benefit_bias = EmpiricalBias{"rail traffic", build_reference_class(ds, traffic).sample};
  c.n_candidates = 16;
  c.budget = 3000;
  c.selection_rule = SelectionRule::exhaustive;
  c.trials = trials;
  c.master_seed = 1;
  return c;
}

std::vector<double> road_traffic_sample() {
  ClassCriteria c;
  c.project_type = ProjectType::road;
  c.measure = Measure::traffic_inaccuracy;
  return build_reference_class(make_sample_dataset(), c).sample;
}

void BM_SimulationSerial(benchmark::State& state) {
  const auto cfg = rail_bias_config(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(run_simulation_serial(cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SimulationParallel(benchmark::State& state) {
  const auto cfg = rail_bias_config(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(run_simulation(cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_BootstrapSerial(benchmark::State& state) {
  const auto sample = road_traffic_sample();
  const auto reps = static_cast<std::size_t>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(bootstrap_replicates_serial(sample, BootstrapStatistic::quantile(0.9), reps, 7));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_BootstrapParallel(benchmark::State& state) {
  const auto sample = road_traffic_sample();
  const auto reps = static_cast<std::size_t>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(bootstrap_replicates(sample, BootstrapStatistic::quantile(0.9), reps, 7));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_SimulationSerial)->Arg(200)->Arg(2000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SimulationParallel)->Arg(200)->Arg(2000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_BootstrapSerial)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_BootstrapParallel)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
