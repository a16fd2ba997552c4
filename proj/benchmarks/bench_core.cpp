#include <benchmark/benchmark.h>

#include "uncert/mus.hpp"
#include "uncert/optimize.hpp"

using namespace uncert;

static void BM_PartialTrace(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const QState rho = random_state({d, d, d}, d, 1);
  for (auto _ : state) benchmark::DoNotOptimize(partial_trace(rho.matrix(), rho.dims(), {0, 2}));
}
BENCHMARK(BM_PartialTrace)->Arg(2)->Arg(3)->Arg(4);

static void BM_EvalEq10(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  RelationInputs in;
  in.state = random_pure_state({d, d, d}, 2);
  in.bases = {random_basis(d, 3), random_basis(d, 4)};
  for (auto _ : state) benchmark::DoNotOptimize(eval_relation(Relation::EQ10, in));
}
BENCHMARK(BM_EvalEq10)->Arg(2)->Arg(3)->Arg(4);

static void BM_PetzRecovery(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const QState rho = random_state({d, 2}, 2 * d, 5);
  const auto [z, x] = fourier_pair(d);
  for (auto _ : state) benchmark::DoNotOptimize(relation_recovery(rho, z, x));
}
BENCHMARK(BM_PetzRecovery)->Arg(2)->Arg(4)->Arg(6);

static void BM_BlochZeta(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(bloch_zeta(0.3, -0.2, 0.5));
}
BENCHMARK(BM_BlochZeta);

static void BM_MinimizeEq20(benchmark::State& state) {
  GapObjective obj;
  obj.d = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(minimize_gap(obj, 7, 1));
}
BENCHMARK(BM_MinimizeEq20)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
