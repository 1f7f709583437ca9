#include <benchmark/benchmark.h>

#include "adual/affine.hpp"
#include "adual/catalog.hpp"
#include "adual/duality.hpp"
#include "adual/entailment.hpp"
#include "adual/factorize.hpp"
#include "adual/hom_groups.hpp"
#include "adual/homs.hpp"
#include "adual/subuniverse.hpp"

using namespace adual;

static void BM_FindAffineTerm(benchmark::State& state) {
  const auto A = catalog::cyclic_group(static_cast<Element>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(find_affine_term(A));
}
BENCHMARK(BM_FindAffineTerm)->Arg(2)->Arg(4)->Arg(6)->Arg(9);

static void BM_SubuniversesOfFourthPower(benchmark::State& state) {
  const auto P = power_algebra(catalog::cyclic_group(static_cast<Element>(state.range(0))), 4);
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_subuniverses(P));
}
BENCHMARK(BM_SubuniversesOfFourthPower)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

static void BM_HomsFromPower(benchmark::State& state) {
  const auto Z4 = catalog::cyclic_group(4);
  const auto P = power_algebra(Z4, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_homs(P, Z4));
}
BENCHMARK(BM_HomsFromPower)->DenseRange(1, 4)->Unit(benchmark::kMicrosecond);

static void BM_FactorMorphism(benchmark::State& state) {
  const auto Z4 = catalog::cyclic_group(4);
  const auto t = *find_affine_term(Z4);
  const int n = static_cast<int>(state.range(0));
  const auto P = power_algebra(Z4, n);
  const auto f = enumerate_homs(P, Z4).back();
  const auto H = build_hk_group(Z4, Z4, t, t, diagonal_restriction(Z4, f));
  const auto F = generating_family(H.group);
  for (auto _ : state) benchmark::DoNotOptimize(factor_morphism(H, F, f));
}
BENCHMARK(BM_FactorMorphism)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

static void BM_ReduceZ2Relations(benchmark::State& state) {
  const auto Z2 = catalog::cyclic_group(2);
  const auto t = *find_affine_term(Z2);
  const auto rels = enumerate_subuniverses(power_algebra(Z2, 3));
  ReduceOptions o;
  o.premise_arity = 4;
  o.force_pipeline = true;
  for (auto _ : state)
    for (const auto& R : rels) benchmark::DoNotOptimize(reduce_to_bounded_arity(Z2, t, R, 1, o));
}
BENCHMARK(BM_ReduceZ2Relations)->Unit(benchmark::kMillisecond);

static void BM_VerifyDuality(benchmark::State& state) {
  const auto ae = build_alter_ego(catalog::cyclic_group(static_cast<Element>(state.range(0))), 4);
  for (auto _ : state) benchmark::DoNotOptimize(verify_duality(ae, 2));
}
BENCHMARK(BM_VerifyDuality)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
