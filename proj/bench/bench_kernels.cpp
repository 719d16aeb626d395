#include <benchmark/benchmark.h>

#include <memory>

#include "riesz/energy.hpp"
#include "riesz/oracle.hpp"
#include "riesz/potential.hpp"
#include "riesz/rng.hpp"
#include "riesz/torus.hpp"

namespace {

using namespace riesz;

Configuration random_config(int n) {
  Rng rng(5, 0);
  return sample_binomial(TorusBox(n, 1), Window({-0.5 * n}, {0.5 * n}), static_cast<std::size_t>(n), rng);
}

void BM_TotalEnergySerial(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const PeriodizedPotential pp(RieszParams(1, 0.5), n);
  const Configuration g = random_config(n);
  for (auto _ : st) {
    benchmark::DoNotOptimize(total_energy_serial(g, pp).total);
  }
}

void BM_TotalEnergyOmp(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const PeriodizedPotential pp(RieszParams(1, 0.5), n);
  const Configuration g = random_config(n);
  for (auto _ : st) {
    benchmark::DoNotOptimize(total_energy(g, pp).total);
  }
}

void BM_ReferenceSerial(benchmark::State& st) {
  const RieszParams p(1, 0.5);
  for (auto _ : st) {
    benchmark::DoNotOptimize(reference_periodized_serial(p, 8, 1.3, st.range(0)).value);
  }
}

void BM_ReferenceOmp(benchmark::State& st) {
  const RieszParams p(1, 0.5);
  for (auto _ : st) {
    benchmark::DoNotOptimize(reference_periodized(p, 8, 1.3, st.range(0)).value);
  }
}

void BM_ConfigurationIntegralSerial(benchmark::State& st) {
  const PeriodizedPotential pp(RieszParams(1, 0.5), 3);
  for (auto _ : st) {
    benchmark::DoNotOptimize(configuration_integral_serial(pp, static_cast<int>(st.range(0)), 1.0, {}));
  }
}

void BM_ConfigurationIntegralOmp(benchmark::State& st) {
  const PeriodizedPotential pp(RieszParams(1, 0.5), 3);
  for (auto _ : st) {
    benchmark::DoNotOptimize(configuration_integral(pp, static_cast<int>(st.range(0)), 1.0, {}));
  }
}

BENCHMARK(BM_TotalEnergySerial)->Arg(64)->Arg(256)->Arg(1024);
BENCHMARK(BM_TotalEnergyOmp)->Arg(64)->Arg(256)->Arg(1024);
BENCHMARK(BM_ReferenceSerial)->Arg(100000)->Arg(1000000);
BENCHMARK(BM_ReferenceOmp)->Arg(100000)->Arg(1000000);
BENCHMARK(BM_ConfigurationIntegralSerial)->Arg(2)->Arg(3);
BENCHMARK(BM_ConfigurationIntegralOmp)->Arg(2)->Arg(3);

}  // namespace

BENCHMARK_MAIN();
