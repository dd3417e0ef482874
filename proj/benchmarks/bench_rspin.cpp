#include <benchmark/benchmark.h>

#include "rspin/amodel.hpp"
#include "rspin/d4.hpp"
#include "rspin/laurent.hpp"

using namespace rspin;

static void BM_CyclotomicProduct(benchmark::State& state) {
  const auto& field = CyclotomicField::get(static_cast<int>(state.range(0)));
  Cyclotomic a = Cyclotomic::zeta(field, 1) + Cyclotomic(field, frac(3, 7));
  const Cyclotomic b = Cyclotomic::zeta(field, 3) * frac(-2, 5) + Cyclotomic::one(field);
  for (auto _ : state) {
    a = a * b;
    a = a * b.inverse();
    benchmark::DoNotOptimize(a);
  }
}
BENCHMARK(BM_CyclotomicProduct)->Arg(8)->Arg(12)->Arg(16);

static void BM_MonicRoot(benchmark::State& state) {
  const int r = static_cast<int>(state.range(0));
  const ASession s(r);
  for (auto _ : state) benchmark::DoNotOptimize(monic_root(s.deformation(), "x", r, -(r + 2)));
}
BENCHMARK(BM_MonicRoot)->DenseRange(2, 6);

static void BM_FlatCoordinates(benchmark::State& state) {
  const int r = static_cast<int>(state.range(0));
  for (auto _ : state) {
    const ASession s(r);
    benchmark::DoNotOptimize(s.s_of_t());
  }
}
BENCHMARK(BM_FlatCoordinates)->DenseRange(2, 6);

static void BM_WdvvBootstrap(benchmark::State& state) {
  const ASession s(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(wdvv_bootstrap(s));
}
BENCHMARK(BM_WdvvBootstrap)->DenseRange(2, 6);

static void BM_BModelPotential(benchmark::State& state) {
  const int r = static_cast<int>(state.range(0));
  for (auto _ : state) {
    const ASession s(r);
    benchmark::DoNotOptimize(s.bmodel_potential());
  }
}
BENCHMARK(BM_BModelPotential)->DenseRange(2, 6);

static void BM_ExtendedIdentity(benchmark::State& state) {
  const ASession s(static_cast<int>(state.range(0)));
  const auto fext = reconstruct_full_fext(s, wdvv_bootstrap(s).potential, extended_from_bmodel(s));
  for (auto _ : state) benchmark::DoNotOptimize(verify_extended_identity(s, fext, "reconstruction"));
}
BENCHMARK(BM_ExtendedIdentity)->DenseRange(2, 6);

static void BM_ExtendedBootstrap(benchmark::State& state) {
  const ASession s(static_cast<int>(state.range(0)));
  const auto frs = wdvv_bootstrap(s).potential;
  ExtendedBootstrapOptions opts;
  opts.max_r = 6;
  for (auto _ : state) benchmark::DoNotOptimize(extended_bootstrap(s, frs, opts));
}
BENCHMARK(BM_ExtendedBootstrap)->DenseRange(2, 6)->Unit(benchmark::kMillisecond);

static void BM_W33Bootstrap(benchmark::State& state) {
  const D4Session d;
  for (auto _ : state) benchmark::DoNotOptimize(w33_bootstrap(d));
}
BENCHMARK(BM_W33Bootstrap);

static void BM_BivariateResidue(benchmark::State& state) {
  const D4Session d;
  const std::vector<Rational> s{frac(1, 2), Rational(2), Rational(-3), Rational(1)};
  const auto phi = d.x(1).pow(2) * d.x(2).pow(2);
  for (auto _ : state) benchmark::DoNotOptimize(bivariate_residue(d, phi, s));
}
BENCHMARK(BM_BivariateResidue);

static void BM_W33Metric(benchmark::State& state) {
  const D4Session d;
  for (auto _ : state) benchmark::DoNotOptimize(saito_metric_w33(d, 0, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_W33Metric)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
