#include <benchmark/benchmark.h>

#include "egtlab/basins.hpp"
#include "egtlab/rng.hpp"
#include "egtlab/spatial.hpp"

using namespace egt;

static void BM_ReplicatorToConvergence(benchmark::State& state) {
  const MatrixGame g = nash_demand(10, {3, 5, 7});
  const PopulationState x0({0.3, 0.3, 0.4});
  for (auto _ : state) benchmark::DoNotOptimize(run_to_convergence(g, x0, DynamicsConfig{}));
}
BENCHMARK(BM_ReplicatorToConvergence);

static void BM_LongRunPayoff(benchmark::State& state) {
  RepeatedGameParams p;
  p.epsilon = 0.05;
  p.apology_cost = 0.5;
  p.reliability = 0.5;
  const auto a = preset("APOLOGIZER"), b = preset("UNFORGIVING");
  for (auto _ : state) benchmark::DoNotOptimize(long_run_payoff(a, b, p));
}
BENCHMARK(BM_LongRunPayoff);

static void BM_InducedMatrix(benchmark::State& state) {
  RepeatedGameParams p;
  p.epsilon = 0.05;
  std::vector<StrategyAutomaton> roster;
  for (const auto& n : preset_names()) roster.push_back(preset(n));
  for (auto _ : state) benchmark::DoNotOptimize(induced_matrix(roster, p));
}
BENCHMARK(BM_InducedMatrix);

static void BM_SimulateMatch(benchmark::State& state) {
  RepeatedGameParams p;
  p.epsilon = 0.05;
  p.horizon = static_cast<std::uint64_t>(state.range(0));
  const auto tft = preset("TFT");
  for (auto _ : state) benchmark::DoNotOptimize(simulate_match(tft, tft, p, 1));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateMatch)->Arg(10000);

static void BM_MixedNash(benchmark::State& state) {
  const MatrixGame g = ultimatum_minigame();
  for (auto _ : state) benchmark::DoNotOptimize(mixed_nash(g, 4));
}
BENCHMARK(BM_MixedNash);

static void BM_SpatialStep(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const SpatialConfig c(GridTopology{n, n, Neighborhood::Moore, true}, stag_hunt());
  Rng rng(1);
  SpatialState s{std::vector<std::size_t>(n * n), 0};
  for (auto& v : s.strategies) v = rng.below(2);
  for (auto _ : state) benchmark::DoNotOptimize(spatial_step(s, c));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n));
}
BENCHMARK(BM_SpatialStep)->Arg(64)->Arg(256);

static void BM_StagHuntBasins(benchmark::State& state) {
  const MatrixGame g = stag_hunt();
  const auto lib = AttractorLibrary::vertices(g);
  for (auto _ : state) benchmark::DoNotOptimize(estimate_basins(g, DynamicsConfig{}, lib, 1000, 42));
}
BENCHMARK(BM_StagHuntBasins)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
