#include <benchmark/benchmark.h>

#include "badlab/badness.hpp"
#include "badlab/lattice.hpp"
#include "badlab/presets.hpp"
#include "badlab/series.hpp"

using namespace badlab;

namespace {

const RateFunction kInv = RateFunction::power_law(Rat(1), Rat(1));

LiftedSpan pair_line() {
  return LiftedSpan::lift(AffineSubspace(preset("cbrt2_pair").value, {{Rat(1), Rat(1)}}));
}

void BM_ChebDistance(benchmark::State& state) {
  const LiftedSpan s = pair_line();
  const RatVec x{Rat(17), Rat(-22, 3), Rat(31, 7)};
  for (auto _ : state) benchmark::DoNotOptimize(cheb_distance(x, s));
}
BENCHMARK(BM_ChebDistance);

void BM_FormsDistance(benchmark::State& state) {
  const LiftedSpan s = pair_line();
  const LatticePoint z{17, -22, 31};
  for (auto _ : state) benchmark::DoNotOptimize(s.forms().distance(z));
}
BENCHMARK(BM_FormsDistance);

void BM_EnumeratePi(benchmark::State& state) {
  const LiftedSpan s = pair_line();
  const auto phi = RateFunction::power_log(Rat(1), Rat(1, 2), Rat(2), Rat(3));
  const SlabSpec spec = SlabSpec::pi(state.range(0), Rat(2), s, phi);
  for (auto _ : state) benchmark::DoNotOptimize(count_slab(spec));
}
BENCHMARK(BM_EnumeratePi)->Arg(16)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_OmegaTrivial(benchmark::State& state) {
  const LiftedSpan b = LiftedSpan::lift(AffineSubspace::point(preset("golden").value));
  for (auto _ : state) benchmark::DoNotOptimize(verify_omega_trivial(b, Rat(23, 100), kInv, Rat(1), state.range(0)));
}
BENCHMARK(BM_OmegaTrivial)->Arg(100)->Arg(1000)->Unit(benchmark::kMicrosecond);

void BM_VectorBadness(benchmark::State& state) {
  const RatVec& w = preset("cbrt2_pair").value;
  const auto phi = RateFunction::power_log(Rat(1), Rat(1, 2), Rat(2), Rat(3));
  const BadnessScanner scanner(phi, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(scanner.scan(w));
}
BENCHMARK(BM_VectorBadness)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_SeriesTerm(benchmark::State& state) {
  const SeriesInstance si{RateFunction::power_law(Rat(1), Rat(1, 2)),
                          RateFunction::power_log(Rat(1), Rat(1, 2), Rat(2), Rat(3)), Rat(2), 1, 0};
  long T = 3;
  for (auto _ : state) benchmark::DoNotOptimize(series_term(T++, si));
}
BENCHMARK(BM_SeriesTerm);

}  // namespace

BENCHMARK_MAIN();
