#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "freezelab/freezing.hpp"
#include "freezelab/orthopoly.hpp"
#include "freezelab/sampling.hpp"
#include "freezelab/stats.hpp"

using namespace freezelab;

static void BM_HermiteZeros(benchmark::State& state) {
  const int n = int(state.range(0));
  for (auto _ : state) {
    ZeroSet zs = hermite_zeros(n);
    benchmark::DoNotOptimize(zs.zeros.data());
  }
}
BENCHMARK(BM_HermiteZeros)->Arg(10)->Arg(50)->Arg(200);

static void BM_LaguerreZeros(benchmark::State& state) {
  const int n = int(state.range(0));
  for (auto _ : state) {
    ZeroSet zs = laguerre_zeros(n, 1.0);
    benchmark::DoNotOptimize(zs.zeros.data());
  }
}
BENCHMARK(BM_LaguerreZeros)->Arg(10)->Arg(50)->Arg(200);

static void BM_FrozenCovariance(benchmark::State& state) {
  const int n = int(state.range(0));
  for (auto _ : state) {
    FrozenCovariance fc = frozen_covariance(RootSystem::A, Flavor::Cauchy, n);
    benchmark::DoNotOptimize(fc.sigma.data());
  }
}
BENCHMARK(BM_FrozenCovariance)->Arg(5)->Arg(15)->Arg(30);

static void BM_SampleBessel(benchmark::State& state) {
  const int n = int(state.range(0));
  const MultiplicitySpec spec = multiplicity_a(n, 1.0);
  RngStream rng(1, 0);
  for (auto _ : state) {
    std::vector<double> y = sample_bessel_ensemble(rng, spec, 1.0);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SampleBessel)->Arg(2)->Arg(5)->Arg(20);

static void BM_SampleLimit(benchmark::State& state) {
  const LimitLaw law = limit_law(LimitSystem::A, int(state.range(0)));
  RngStream rng(1, 0);
  for (auto _ : state) {
    std::vector<double> y = sample_limit(rng, law);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SampleLimit)->Arg(2)->Arg(5)->Arg(20);

static void BM_LimitLogDensity(benchmark::State& state) {
  const LimitLaw law = limit_law(LimitSystem::A, int(state.range(0)));
  RngStream rng(1, 0);
  const std::vector<double> y = sample_limit(rng, law);
  for (auto _ : state) {
    benchmark::DoNotOptimize(limit_log_density(law, y));
  }
}
BENCHMARK(BM_LimitLogDensity)->Arg(2)->Arg(10);

static void BM_EnergyStatistic(benchmark::State& state) {
  const int npts = int(state.range(0));
  const int dim = 2;
  RngStream rng(2, 0);
  std::vector<double> x(npts * dim), y(npts * dim);
  for (double& v : x) v = rng.normal();
  for (double& v : y) v = rng.normal();
  for (auto _ : state) {
    RngStream erng(3, 0);
    TestReport r = energy_two_sample("bench", x, y, dim, 1, 0.05, erng);
    benchmark::DoNotOptimize(r.statistic);
  }
}
BENCHMARK(BM_EnergyStatistic)->Arg(200)->Arg(1000);

BENCHMARK_MAIN();
