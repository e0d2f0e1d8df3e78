#include <benchmark/benchmark.h>

#include <vector>

#include "ietx/dynamics.hpp"

namespace {

using namespace ietx;

const NumericsConfig kFixed{Backend::fixed, 256};

Iet golden_composite() {
  const Iet t = Iet::make({Scalar::from_ratio(1, 2, kFixed), Scalar::from_ratio(1, 4, kFixed),
                           Scalar::from_ratio(1, 4, kFixed)},
                          Permutation::from_one_based({3, 2, 1}));
  return canonicalize(compose(t, rotation(golden_conjugate(256))));
}

void BM_Orbit(benchmark::State& state) {
  const Iet t = golden_composite();
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(orbit(t, Scalar::from_ratio(1, 7, kFixed), n));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Orbit)->RangeMultiplier(8)->Range(1 << 10, 1 << 16);

void BM_StarDiscrepancy(benchmark::State& state) {
  const Iet t = golden_composite();
  const Orbit o = orbit(t, Scalar::from_ratio(1, 7, kFixed), static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(star_discrepancy(o.points));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_StarDiscrepancy)->RangeMultiplier(8)->Range(1 << 10, 1 << 16);

void BM_UeDiagnostic(benchmark::State& state) {
  const Iet t = golden_composite();
  DiagnosticConfig c = DiagnosticConfig::defaults();
  c.ladder = dyadic_ladder(10, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ue_diagnostic(t, c));
}
BENCHMARK(BM_UeDiagnostic)->DenseRange(14, 18, 2)->Unit(benchmark::kMillisecond);

void BM_IdocCheck(benchmark::State& state) {
  const Iet t = golden_composite();
  for (auto _ : state) benchmark::DoNotOptimize(idoc_check(t, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_IdocCheck)->Arg(1000)->Arg(10000);

void BM_PropertyP(benchmark::State& state) {
  const Iet t = rotation(golden_conjugate(256));
  for (auto _ : state) benchmark::DoNotOptimize(property_p_profile(t, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_PropertyP)->Arg(100)->Arg(1000);

}  // namespace
