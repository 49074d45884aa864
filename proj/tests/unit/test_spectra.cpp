#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "oracles.hpp"
#include "paulilab/eigensolver.hpp"
#include "paulilab/linear_operator.hpp"
#include "paulilab/minimizer.hpp"
#include "paulilab/pauli.hpp"
#include "paulilab/potential.hpp"
#include "paulilab/spectra.hpp"

using namespace paulilab;
namespace pt = paulilab::testing;

namespace {

Grid cube(int n, double box) { return Grid({n, n, n}, {box, box, box}); }

SolverOptions solver(SolverKind kind) {
  SolverOptions o;
  o.kind = kind;
  o.cross_check = false;
  return o;
}

SpectralResult synthetic(std::vector<double> values) {
  SpectralResult s;
  s.eigenvalues = std::move(values);
  s.complete = true;
  return s;
}

}  // namespace

TEST(NegativeSpectrum, NonPositivePotentialHasNoNegativeEigenvalues) {
  const Grid g = cube(6, 4.2);
  const PauliOperator op(g, random_coulomb_field(g, 0.3, 1), ScalarField(g, -0.4), 0.95);
  for (auto kind : {SolverKind::Dense, SolverKind::Iterative}) {
    const SpectralResult s = negative_spectrum(op, 0.0, solver(kind));
    EXPECT_TRUE(s.complete);
    EXPECT_TRUE(s.eigenvalues.empty());
    EXPECT_EQ(trace_minus(s).value, 0.0);
  }
}

TEST(NegativeSpectrum, IterativeMatchesDenseOnGaussianWell) {
  const Grid g = cube(4, 3.0);
  PotentialSpec ps;
  ps.params = {{"amplitude", 8.0}, {"width", 0.6}, {"floor", -1.5}};
  const ScalarField v = sample_potential(ps, g);
  const PauliOperator op(g, VectorField(g), v, 0.8 < min_resolved_h(g) ? min_resolved_h(g) : 0.8);
  const SpectralResult it = negative_spectrum(op, 0.0, solver(SolverKind::Iterative));
  const Eigen::VectorXd ref = pt::hermitian_eigenvalues(pt::pauli_matrix(g, VectorField(g), v, op.h()));
  std::vector<double> want;
  for (double x : ref)
    if (x <= 0.0) want.push_back(x);
  ASSERT_EQ(it.size(), want.size());
  ASSERT_GT(want.size(), 0u);
  for (std::size_t i = 0; i < want.size(); ++i) EXPECT_NEAR(it.eigenvalues[i], want[i], 1e-8);
}

TEST(NegativeSpectrum, ConstantPotentialMatchesLatticeWithDegeneracies) {
  const Grid g = cube(8, 6.0);
  const double h = 0.96, v0 = 1.2, tau = 0.0;
  const PauliOperator op(g, VectorField(g), ScalarField(g, v0), h);
  const std::vector<double> want = pt::free_spectrum(g, h, v0, tau);
  for (auto kind : {SolverKind::Dense, SolverKind::Iterative}) {
    const SpectralResult s = negative_spectrum(op, tau, solver(kind));
    ASSERT_EQ(s.size(), want.size()) << to_string(kind);
    double sum = 0.0;
    for (std::size_t i = 0; i < want.size(); ++i) {
      EXPECT_NEAR(s.eigenvalues[i], want[i], 1e-9);
      sum += want[i];
    }
    EXPECT_NEAR(trace_minus(s).value, sum, 1e-8);
  }
}

TEST(NegativeSpectrum, EigenfunctionsAreOrthonormalWithSmallResiduals) {
  const auto inst = pt::random_instance(6, 2, 0.5);
  const PauliOperator op(inst.grid, inst.a, inst.v, inst.h);
  const SpectralResult s = negative_spectrum(op, 0.0, solver(SolverKind::Iterative));
  ASSERT_GT(s.size(), 0u);
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = 0; j < s.size(); ++j) {
      EXPECT_NEAR(std::abs(s.eigenfunctions[i].inner(s.eigenfunctions[j])), i == j ? 1.0 : 0.0, 1e-9);
    }
    const Eigen::VectorXcd r = op.apply(s.eigenfunctions[i]).values() -
                               s.eigenvalues[i] * s.eigenfunctions[i].values();
    EXPECT_LT(r.norm() * std::sqrt(inst.grid.cell_volume()), 1e-8);
  }
}

TEST(NegativeSpectrum, EigenvaluesRespectTheLowerBound) {
  const auto inst = pt::random_instance(6, 7, 0.6);
  const PauliOperator op(inst.grid, inst.a, inst.v, inst.h);
  const SpectralResult s = negative_spectrum(op, 0.0);
  EXPECT_TRUE(s.lower_bound_ok);
  ASSERT_GT(s.size(), 0u);
  EXPECT_GE(s.eigenvalues.front(), -inst.v.max());
}

TEST(Krylov, FindsClusteredEigenvaluesOfADiagonalMatrix) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(300, 300);
  for (int i = 0; i < 300; ++i) m(i, i) = i < 7 ? -1.0 : (i < 10 ? -0.5 + 1e-9 * i : 0.1 * i);
  struct Dense : LinearOperator {
    const Eigen::MatrixXcd& m;
    explicit Dense(const Eigen::MatrixXcd& mm) : m(mm) {}
    Eigen::Index dim() const override { return m.rows(); }
    void apply(const Eigen::MatrixXcd& x, Eigen::MatrixXcd& y) const override { y = m * x; }
  } op(m);
  const EigenPairs p = krylov_eigenpairs(op, 0.0, 40.0);
  ASSERT_TRUE(p.converged) << p.message;
  ASSERT_EQ(p.values.size(), 10);
  for (int i = 0; i < 7; ++i) EXPECT_NEAR(p.values[i], -1.0, 1e-10);
}

TEST(TraceMinus, Arithmetic) {
  EXPECT_EQ(trace_minus(synthetic({})).value, 0.0);
  SpectralResult s = synthetic({-2.0, -1.0});
  s.just_above = {3.0};
  EXPECT_EQ(trace_minus(s).value, -3.0);
  EXPECT_EQ(trace_minus(s).count, 2);
}

TEST(TraceMinus, IncompleteSpectrumThrows) {
  SpectralResult s = synthetic({-1.0});
  s.complete = false;
  EXPECT_THROW(trace_minus(s), std::runtime_error);
}

TEST(DensityE1, UnitWeightRecoversTheTraceAndZeroWeightGivesZero) {
  const auto inst = pt::random_instance(5, 3, 0.4);
  const PauliOperator op(inst.grid, inst.a, inst.v, inst.h);
  const SpectralResult s = negative_spectrum(op, 0.0);
  const double tr = trace_minus(s).value;
  EXPECT_NEAR(density_e1(s, ScalarField(inst.grid, 1.0)), tr, 1e-10 * std::max(1.0, std::abs(tr)));
  EXPECT_EQ(density_e1(s, ScalarField(inst.grid, 0.0)), 0.0);
}

TEST(DensityE1, MatchesDenseKernelDiagonal) {
  const auto inst = pt::random_instance(4, 21, 0.4);
  const Eigen::MatrixXcd hm = pt::pauli_matrix(inst.grid, inst.a, inst.v, inst.h);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hm);
  const std::size_t n = inst.grid.size();
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ScalarField psi2(inst.grid);
  for (std::size_t s = 0; s < n; ++s) psi2[s] = u(rng);
  // e1(x, x) = sum lambda_n |u_n(x)|^2 / dV over lambda_n < 0 (Euclidean vectors).
  double want = 0.0;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    const double lam = es.eigenvalues()[k];
    if (lam >= 0.0) break;
    for (std::size_t s = 0; s < n; ++s) {
      want += lam * (std::norm(es.eigenvectors()(s, k)) + std::norm(es.eigenvectors()(s + n, k))) * psi2[s];
    }
  }
  const PauliOperator op(inst.grid, inst.a, inst.v, inst.h);
  EXPECT_NEAR(density_e1(negative_spectrum(op, 0.0), psi2), want, 1e-10 * std::max(1.0, std::abs(want)));
}

TEST(DiagDensity, IntegratesToTheCount) {
  const auto inst = pt::random_instance(6, 2, 0.4);
  const PauliOperator op(inst.grid, inst.a, inst.v, inst.h);
  const SpectralResult s = negative_spectrum(op, 0.0);
  ASSERT_GT(s.size(), 0u);
  EXPECT_NEAR(diag_density(s, 0.0).integral(), double(trace_minus(s).count), 1e-10);
  EXPECT_THROW(diag_density(synthetic({}), 0.0), std::invalid_argument);
}

TEST(SmoothedTrace, PlateauAndPointValues) {
  const SmoothingSpec sm{0.5};
  auto upto = [](std::vector<double> values) {
    SpectralResult s = synthetic(std::move(values));
    s.threshold = 0.5;
    return s;
  };
  EXPECT_NEAR(smoothed_trace(upto({-3.0, -1.0}), sm), -4.0, 1e-15);
  EXPECT_NEAR(smoothed_trace(upto({0.0}), sm), -0.5, 1e-15);
  EXPECT_THROW(smoothed_trace(synthetic({-1.0}), sm), std::runtime_error);
  EXPECT_EQ(SmoothingSpec::phibar(0.0), 1.0);
  EXPECT_EQ(SmoothingSpec::phibar(1.0), 0.0);
}

TEST(SmoothedTrace, NeverExceedsThePlainTrace) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-2.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> values(10);
    for (double& x : values) x = u(rng);
    std::sort(values.begin(), values.end());
    const SmoothingSpec sm{0.3 + 0.1 * (trial % 7)};
    SpectralResult s = synthetic(values);
    s.threshold = 2.0;
    double plain = 0.0;
    for (double x : values)
      if (x < 0) plain += x;
    EXPECT_LE(smoothed_trace(s, sm), plain + 1e-15);
  }
}

TEST(SpectralIo, SaveLoadRoundTrip) {
  const auto inst = pt::random_instance(4, 2, 0.4);
  const PauliOperator op(inst.grid, inst.a, inst.v, inst.h);
  const SpectralResult s = negative_spectrum(op, 0.0);
  const auto dir = std::filesystem::temp_directory_path() / "paulilab_spectral_io";
  std::filesystem::create_directories(dir);
  save_spectral(s, dir / "s");
  const SpectralResult r = load_spectral(dir / "s");
  ASSERT_EQ(r.size(), s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_EQ(r.eigenvalues[i], s.eigenvalues[i]);
    EXPECT_EQ((r.eigenfunctions[i].values() - s.eigenfunctions[i].values()).norm(), 0.0);
  }
  EXPECT_EQ(r.complete, s.complete);
  std::filesystem::remove_all(dir);
}
