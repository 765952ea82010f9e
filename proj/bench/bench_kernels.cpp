// Serial reference vs OpenMP kernels: the register matvec and a sweep.
#include <benchmark/benchmark.h>

#include "grover/experiments.hpp"

namespace {

using namespace grover;

SparseHamiltonian register_at_peak(int n_atoms) {
  const SearchProblem problem(n_atoms, n_atoms / 4);
  return full_register_matrix(0.5, problem, tailored_pair(2.0, 1.5), true);
}

void BM_RegisterApplySerial(benchmark::State& state) {
  const SparseHamiltonian h = register_at_peak(static_cast<int>(state.range(0)));
  Eigen::VectorXcd x = Eigen::VectorXcd::Ones(h.dimension());
  Eigen::VectorXcd y(h.dimension());
  for (auto _ : state) {
    h.apply_serial(x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * h.dimension());
}

void BM_RegisterApplyOmp(benchmark::State& state) {
  const SparseHamiltonian h = register_at_peak(static_cast<int>(state.range(0)));
  Eigen::VectorXcd x = Eigen::VectorXcd::Ones(h.dimension());
  Eigen::VectorXcd y(h.dimension());
  for (auto _ : state) {
    h.apply(x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * h.dimension());
}

void BM_KrylovStep(benchmark::State& state) {
  const SparseHamiltonian h = register_at_peak(static_cast<int>(state.range(0)));
  Eigen::VectorXcd psi = Eigen::VectorXcd::Ones(h.dimension()).normalized();
  for (auto _ : state) {
    psi = krylov_step(h, psi, 1e-3, 12);
    benchmark::DoNotOptimize(psi.data());
  }
}

void run_sweep(benchmark::State& state, Execution execution) {
  const std::vector<double> fs = dyadic_fractions(1, 4);
  for (auto _ : state) {
    const ScalingFit fit = scaling_sweep(fs, Design::Tailored, 1.5, {}, execution);
    benchmark::DoNotOptimize(fit.beta);
  }
}

void BM_ScalingSweepSerial(benchmark::State& state) { run_sweep(state, Execution::Serial); }
void BM_ScalingSweepParallel(benchmark::State& state) { run_sweep(state, Execution::Parallel); }

}  // namespace

BENCHMARK(BM_RegisterApplySerial)->RangeMultiplier(4)->Range(1 << 10, 1 << 16);
BENCHMARK(BM_RegisterApplyOmp)->RangeMultiplier(4)->Range(1 << 10, 1 << 16);
BENCHMARK(BM_KrylovStep)->Arg(64)->Arg(4096);
BENCHMARK(BM_ScalingSweepSerial)->Unit(benchmark::kMillisecond)->Iterations(2);
BENCHMARK(BM_ScalingSweepParallel)->Unit(benchmark::kMillisecond)->Iterations(2);

BENCHMARK_MAIN();
