#include <benchmark/benchmark.h>

#include "scfrag/beta.hpp"
#include "scfrag/chain.hpp"
#include "scfrag/mc.hpp"
#include "scfrag/planner.hpp"

using namespace scfrag;

static void BM_BetapowerMean(benchmark::State& state) {
  const BetaParams base(0.4, 0.3);
  double power = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(betapower_mean(base, power));
    power = power < 1e6 ? power * 1.7 : 1.0;
  }
}
BENCHMARK(BM_BetapowerMean);

static void BM_Eta(benchmark::State& state) {
  const BetaParams base(0.4, 0.3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(eta(3.0, static_cast<double>(state.range(0)), base));
  }
}
BENCHMARK(BM_Eta)->Arg(1)->Arg(16)->Arg(4096);

static void BM_OptimalSourcingCorrelated(benchmark::State& state) {
  const BetaParams base(0.3, 0.4);
  const double mu_up = betapower_mean(base, 4.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(optimal_sourcing_correlated(4.0, mu_up, base, 1.0, 0.01));
  }
}
BENCHMARK(BM_OptimalSourcingCorrelated);

static void BM_PropagateChain(benchmark::State& state) {
  const EconomyParams econ(1, 1.0, 0.004, BetaParams(0.6, 0.4));
  for (auto _ : state) {
    benchmark::DoNotOptimize(propagate_chain(econ));
  }
}
BENCHMARK(BM_PropagateChain);

static void BM_PlannerSolve(benchmark::State& state) {
  const EconomyParams econ(static_cast<int>(state.range(0)), 1.0, 0.01,
                           BetaParams(0.4, 0.3));
  for (auto _ : state) {
    benchmark::DoNotOptimize(planner_solve(econ, 8));
  }
}
BENCHMARK(BM_PlannerSolve)->Arg(4)->Arg(8);

static void BM_RunTrials(benchmark::State& state) {
  const std::vector<int> s{3, 2, 2};
  const Network net = build_tree_network(3, s);
  const BetaParams base(0.4, 0.35);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        run_trials(net, BasalMode::CommonDraw, base, state.range(0), 7));
  }
}
BENCHMARK(BM_RunTrials)->Arg(1000)->Arg(10000);

BENCHMARK_MAIN();
