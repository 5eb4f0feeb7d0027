#include <benchmark/benchmark.h>

#include "fraclab/fields.hpp"
#include "fraclab/operators.hpp"
#include "fraclab/special.hpp"
#include "fraclab/symbols.hpp"
#include "fraclab/varlp.hpp"

namespace {

using namespace fraclab;

void BM_BesselJ(benchmark::State& state) {
  const double x = static_cast<double>(state.range(0));
  double s = 0.0;
  for (auto _ : state) {
    s += bessel_j(0.75, x);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_BesselJ)->Arg(1)->Arg(20)->Arg(1000);

void BM_SymbolW(benchmark::State& state) {
  const HypersingularSymbol& sym = hypersingular_symbol(static_cast<int>(state.range(0)), 2, 0.5);
  double r = 0.01;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sym.w(r));
    r = r < 1e4 ? r * 1.7 : 0.01;
  }
}
BENCHMARK(BM_SymbolW)->Arg(1)->Arg(2)->Arg(3);

void BM_SymbolBJet(benchmark::State& state) {
  const HypersingularSymbol& sym = hypersingular_symbol(2, 2, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(sym.B_jet(37.5, 2));
}
BENCHMARK(BM_SymbolBJet);

void BM_SpectralRoundTrip(benchmark::State& state) {
  const Grid g = make_grid(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)), 8.0);
  const Field f = test_field(TestFieldSpec{}, g);
  for (auto _ : state) benchmark::DoNotOptimize(from_spectral(to_spectral(f)));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(g.size()));
}
BENCHMARK(BM_SpectralRoundTrip)->Args({1, 4096})->Args({2, 256})->Args({3, 32});

void BM_NormalizedDifference(benchmark::State& state) {
  const Grid g = make_grid(1, static_cast<int>(state.range(0)), 16.0);
  const Field f = test_field(TestFieldSpec{}, g);
  const auto path = state.range(1) ? DifferencePath::series : DifferencePath::spectral;
  for (auto _ : state) benchmark::DoNotOptimize(normalized_difference(f, 0.05, 0.5, path));
}
BENCHMARK(BM_NormalizedDifference)->Args({1024, 0})->Args({1024, 1});

void BM_HypersingularQuadrature(benchmark::State& state) {
  const Grid g = make_grid(1, static_cast<int>(state.range(0)), 16.0);
  const Field f = test_field(TestFieldSpec{}, g);
  OperatorSpec spec;
  spec.eps = 0.1;
  for (auto _ : state) benchmark::DoNotOptimize(hypersingular_truncated(f, spec, HypersingularPath::quadrature));
}
BENCHMARK(BM_HypersingularQuadrature)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_LuxemburgNorm(benchmark::State& state) {
  const Grid g = make_grid(1, static_cast<int>(state.range(0)), 20.0);
  const Field f = test_field(TestFieldSpec{}, g);
  const ExponentField p = exponent_from_family(g, ExponentFamily{ExponentFamily::Kind::rational_decay, 2.0, 1.0});
  for (auto _ : state) benchmark::DoNotOptimize(luxemburg_norm(f, p));
}
BENCHMARK(BM_LuxemburgNorm)->Arg(1024)->Arg(16384);

}  // namespace

BENCHMARK_MAIN();
