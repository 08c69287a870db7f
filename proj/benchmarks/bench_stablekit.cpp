#include <benchmark/benchmark.h>

#include "stablekit/fixtures.hpp"
#include "stablekit/homog.hpp"
#include "stablekit/integrability.hpp"
#include "stablekit/parse.hpp"
#include "stablekit/puiseux.hpp"
#include "stablekit/realization.hpp"
#include "stablekit/regularity.hpp"
#include "stablekit/stability.hpp"

using namespace stablekit;

namespace {

const std::vector<GaussRat> kOrigin{GaussRat(0), GaussRat(0)};
const std::vector<GaussRat> kOne{GaussRat(1), GaussRat(1)};

Poly sextic() { return fixtures::halfplane_image(fixtures::get("sextic_contact"), kOne); }

}  // namespace

static void BM_CayleyTransfer(benchmark::State& state) {
  Poly p = parse_poly("4 - 5z1 - 2z2 + 2z1z2 + 3z1^2 - z1^2z2 - z1^3z2");
  for (auto _ : state) benchmark::DoNotOptimize(cayley_to_halfplane(p, {3, 1}));
}
BENCHMARK(BM_CayleyTransfer);

static void BM_PuiseuxSextic(benchmark::State& state) {
  Poly p = sextic();
  for (auto _ : state) benchmark::DoNotOptimize(puiseux::puiseux_factorize(p, kOrigin));
}
BENCHMARK(BM_PuiseuxSextic)->Unit(benchmark::kMicrosecond);

static void BM_LowerBound(benchmark::State& state) {
  auto f = puiseux::puiseux_factorize(sextic(), kOrigin);
  for (auto _ : state)
    benchmark::DoNotOptimize(puiseux::verify_branch_lower_bound(f.branches[0], 0.05, static_cast<int>(state.range(0))));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_LowerBound)->RangeMultiplier(4)->Range(256, 16384)->Complexity()->Unit(benchmark::kMicrosecond);

static void BM_Regularity(benchmark::State& state) {
  Poly p = sextic();
  auto n = homog::normalize_lowest(p, kOrigin);
  for (auto _ : state)
    benchmark::DoNotOptimize(regularity::analyze_regularity(-n.split.B, n.split.A, kOrigin, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_Regularity)->DenseRange(1, 5)->Unit(benchmark::kMicrosecond);

static void BM_IntegrabilityIndices(benchmark::State& state) {
  Poly p = fixtures::denominator(fixtures::get("two_zeros"));
  for (auto _ : state) benchmark::DoNotOptimize(integrability::derivative_integrability_indices(p));
}
BENCHMARK(BM_IntegrabilityIndices)->Unit(benchmark::kMillisecond);

static void BM_StabilityDisk(benchmark::State& state) {
  Poly p = fixtures::denominator(fixtures::get("two_zeros"));
  for (auto _ : state) benchmark::DoNotOptimize(stability::check_stable(p, Domain::Disk));
}
BENCHMARK(BM_StabilityDisk)->Unit(benchmark::kMillisecond);

static void BM_RealizationSplit(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  auto R = realization::random_realization(n, n / 2, 7);
  for (auto _ : state) benchmark::DoNotOptimize(realization::local_split(R));
  state.SetComplexityN(n);
}
BENCHMARK(BM_RealizationSplit)->DenseRange(2, 12, 2)->Complexity();

static void BM_RealizationValidate(benchmark::State& state) {
  auto R = realization::random_realization(6, 3, 7);
  for (auto _ : state) benchmark::DoNotOptimize(realization::validate_pip(R, static_cast<int>(state.range(0)), 1));
}
BENCHMARK(BM_RealizationValidate)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
