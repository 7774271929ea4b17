#include <benchmark/benchmark.h>

#include "qcn/experiment.hpp"
#include "qcn/measures.hpp"
#include "qcn/noise.hpp"
#include "qcn/pauli.hpp"
#include "qcn/sampling.hpp"

using namespace qcn;

namespace {

ComplexMatrix random_hermitian(std::size_t dim, SplitMix64 &rng) {
  ComplexMatrix m(dim);
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = 0; c < dim; ++c)
      m(r, c) = Complex(rng.next_gaussian(), rng.next_gaussian());
  return 0.5 * (m + m.adjoint());
}

void BM_hermitian_eig(benchmark::State &state) {
  SplitMix64 rng(1);
  const ComplexMatrix h = random_hermitian(std::size_t(state.range(0)), rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(hermitian_eigenvalues(h));
  }
}
BENCHMARK(BM_hermitian_eig)->Arg(4)->Arg(8)->Arg(16);

void BM_channel_apply(benchmark::State &state) {
  const ChoiOperator choi =
      build_channel(NoiseFamily::depolarizing(2, 0.1)).choi;
  const EnsembleStream stream(
      EnsembleSpec{EnsembleKind::HaarPure, 2, 1, 7});
  const StateOperator rho = stream.at(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(apply(choi, rho.matrix()));
  }
}
BENCHMARK(BM_channel_apply);

void BM_log_negativity(benchmark::State &state) {
  const EnsembleStream stream(
      EnsembleSpec{EnsembleKind::HaarPure, 2, 1, 11});
  const StateOperator rho = stream.at(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(log_negativity(rho, 1));
  }
}
BENCHMARK(BM_log_negativity);

void BM_haar_sample(benchmark::State &state) {
  const EnsembleStream stream(
      EnsembleSpec{EnsembleKind::HaarPure, 2, 1u << 20, 13});
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(stream.at(i++));
  }
}
BENCHMARK(BM_haar_sample);

void BM_channel_inverse(benchmark::State &state) {
  const ChoiOperator choi =
      build_channel(NoiseFamily::amplitude_damping(2, 0.2)).choi;
  for (auto _ : state) {
    benchmark::DoNotOptimize(inverse(choi));
  }
}
BENCHMARK(BM_channel_inverse);

void BM_sweep_per_sample(benchmark::State &state) {
  // full per-record pipeline cost at one epsilon
  SweepConfig cfg{NoiseFamily::depolarizing(2, 0.0),
                  {0.05},
                  EnsembleSpec{EnsembleKind::HaarPure, 2,
                               std::size_t(state.range(0)), 17}};
  cfg.threads = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_sweep(cfg));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_sweep_per_sample)->Arg(64)->Arg(256);

} // namespace

BENCHMARK_MAIN();
