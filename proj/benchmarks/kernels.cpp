// Hot kernels: transfer-matrix products, Lyapunov sampling, Sturm bisection
// and digit forging.

#include <benchmark/benchmark.h>

#include "harperlab/cocycle.hpp"
#include "harperlab/contfrac.hpp"
#include "harperlab/model.hpp"
#include "harperlab/spectral.hpp"
#include "harperlab/tridiag.hpp"

using namespace harperlab;

namespace {

model::OperatorSample generic_sample() {
  return model::OperatorSample({0.1, 0.5, 0.2}, Frequency::from_cf(contfrac::golden(60)), 0.0);
}

void BM_NStep(benchmark::State& state) {
  const auto s = generic_sample();
  const long n = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(cocycle::n_step(s, 0.3, 0.1, n, cocycle::Kind::normalized));
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_NStep)->Arg(1000)->Arg(100000);

void BM_LyapunovNumeric(benchmark::State& state) {
  const auto s = generic_sample();
  for (auto _ : state)
    benchmark::DoNotOptimize(cocycle::lyapunov_numeric(s, 0.3, state.range(0), 64, cocycle::Kind::normalized));
}
BENCHMARK(BM_LyapunovNumeric)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_SturmSpectrum(benchmark::State& state) {
  const auto s = generic_sample();
  const auto size = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(spectral::truncated_spectrum(s, size));
}
BENCHMARK(BM_SturmSpectrum)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_Forge(benchmark::State& state) {
  const auto base = contfrac::golden(5);
  const auto levels = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(contfrac::forge(base, 5, contfrac::ConstantBeta{0.5}, levels));
}
BENCHMARK(BM_Forge)->Arg(2)->Arg(3);

}  // namespace

BENCHMARK_MAIN();
