#include <benchmark/benchmark.h>

#include "covert/belief.hpp"
#include "covert/engine.hpp"
#include "covert/scenario_io.hpp"
#include "covert/strategy.hpp"

namespace {

using namespace covert;

// Support size grows with the number of non-benign steps; advance the law
// `state.range(0)` attacking steps before timing one more.
void BM_DistStep(benchmark::State& state) {
  const Scenario s = preset("example_sec4");
  const auto lik = likelihood_pair(s, 0, 1);
  auto d = BeliefDistribution::point(Belief(s.initial_belief_malicious));
  for (int i = 0; i < state.range(0); ++i) d = dist_step(d, lik, s.merge_tolerance);
  state.counters["support"] = static_cast<double>(d.size());
  for (auto _ : state) {
    benchmark::DoNotOptimize(dist_step(d, lik, s.merge_tolerance));
  }
}
BENCHMARK(BM_DistStep)->Arg(10)->Arg(100)->Arg(280);

void BM_SolveStage(benchmark::State& state) {
  const Scenario s = preset("example_sec4");
  double pi = 0.0;
  for (auto _ : state) {
    pi = pi >= 0.99 ? 0.01 : pi + 0.001;
    benchmark::DoNotOptimize(solve_stage(pi, 0, s));
  }
}
BENCHMARK(BM_SolveStage);

void BM_RunPath(benchmark::State& state) {
  const Scenario s = preset("example_sec4");
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(run_path(s, seed++));
}
BENCHMARK(BM_RunPath)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
