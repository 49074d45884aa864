#include <benchmark/benchmark.h>

#include <complex>
#include <random>
#include <vector>

#include "paulilab/fft.hpp"
#include "paulilab/minimizer.hpp"
#include "paulilab/pauli.hpp"
#include "paulilab/potential.hpp"
#include "paulilab/selfgen.hpp"
#include "paulilab/spectra.hpp"

using namespace paulilab;

namespace {

// Small grids need a wider spacing to keep the well inside the box, and then h = 1.
Grid cube(int n) {
  const double box = n <= 8 ? 0.75 * n : 0.45 * n;
  return Grid({n, n, n}, {box, box, box});
}

double h_for(int n) { return n <= 8 ? 1.0 : 0.8; }

ScalarField well(const Grid& g) {
  PotentialSpec ps;
  ps.preset = "gaussian_well";
  return sample_potential(ps, g);
}

}  // namespace

static void BM_Fft3(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Fft3& fft = Fft3::for_dims({n, n, n});
  std::vector<std::complex<double>> data(fft.size());
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  for (auto& z : data) z = {g(rng), g(rng)};
  for (auto _ : state) {
    fft.forward(data.data());
    fft.backward(data.data());
    benchmark::DoNotOptimize(data.data());
  }
  state.SetItemsProcessed(state.iterations() * 2);
}
BENCHMARK(BM_Fft3)->Arg(8)->Arg(16)->Arg(24)->Arg(32)->Unit(benchmark::kMicrosecond);

// Pauli operator on a block of spinors, with a nonzero field.
static void BM_PauliApply(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int cols = static_cast<int>(state.range(1));
  const Grid g = cube(n);
  const PauliOperator op(g, random_coulomb_field(g, 0.1, 7), well(g), h_for(n));
  const Eigen::MatrixXcd x = Eigen::MatrixXcd::Random(op.dim(), cols);
  Eigen::MatrixXcd y;
  for (auto _ : state) {
    op.apply(x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * cols);
}
BENCHMARK(BM_PauliApply)
    ->Args({8, 1})
    ->Args({16, 1})
    ->Args({16, 4})
    ->Args({24, 4})
    ->Unit(benchmark::kMillisecond);

static void BM_NegativeSpectrum(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Grid g = cube(n);
  const PauliOperator op(g, VectorField(g), well(g), h_for(n));
  SolverOptions opt;
  opt.kind = state.range(1) ? SolverKind::Dense : SolverKind::Iterative;
  int count = 0;
  for (auto _ : state) {
    const SpectralResult s = negative_spectrum(op, 0.0, opt);
    count = static_cast<int>(s.size());
    benchmark::DoNotOptimize(s.eigenvalues.data());
  }
  state.counters["eigenvalues"] = count;
}
BENCHMARK(BM_NegativeSpectrum)
    ->Args({6, 1})
    ->Args({6, 0})
    ->Args({12, 0})
    ->Args({16, 0})
    ->Unit(benchmark::kMillisecond);

static void BM_Current(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Grid g = cube(n);
  const PauliOperator op(g, random_coulomb_field(g, 0.1, 7), well(g), h_for(n));
  const SpectralResult s = negative_spectrum(op, 0.0);
  for (auto _ : state) {
    const VectorField phi = current_phi(s, op);
    benchmark::DoNotOptimize(phi[0].values().data());
  }
  state.counters["eigenvalues"] = static_cast<double>(s.size());
}
BENCHMARK(BM_Current)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
