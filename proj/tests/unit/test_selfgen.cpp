#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "paulilab/minimizer.hpp"
#include "paulilab/pauli.hpp"
#include "paulilab/potential.hpp"
#include "paulilab/selfgen.hpp"
#include "paulilab/spectral_ops.hpp"

using namespace paulilab;
namespace pt = paulilab::testing;

namespace {

const double kPi = std::numbers::pi;

struct Well {
  Grid g{{6, 6, 6}, {4.2, 4.2, 4.2}};
  ScalarField v = sample_potential(PotentialSpec{}, g);
  double h = 0.95;
};

}  // namespace

TEST(Energy, ZeroFieldIsThePlainTrace) {
  Well s;
  const double tr = trace_minus(negative_spectrum(PauliOperator(s.g, VectorField(s.g), s.v, s.h), 0.0)).value;
  EXPECT_DOUBLE_EQ(energy(VectorField(s.g), s.v, s.h, 0.5), tr);
}

TEST(Energy, FieldTermScalesWithInverseKappa) {
  Well s;
  const VectorField a = random_coulomb_field(s.g, 0.3, 2);
  const PauliOperator op(s.g, a, s.v, s.h);
  const EnergyEvaluation e1 = evaluate_energy(op, 0.5), e2 = evaluate_energy(op, 0.25);
  EXPECT_DOUBLE_EQ(e1.trace_term, e2.trace_term);
  EXPECT_NEAR(e2.field_term, 2.0 * e1.field_term, 1e-14 * e2.field_term);
  EXPECT_NEAR(e1.field_term, grad_energy(a) / (0.5 * s.h * s.h), 1e-14 * e1.field_term);
}

TEST(Energy, NonPositivePotentialLeavesOnlyTheFieldTerm) {
  Well s;
  const VectorField a = random_coulomb_field(s.g, 0.3, 2);
  const double e = energy(a, ScalarField(s.g, -0.3), s.h, 0.7);
  EXPECT_NEAR(e, grad_energy(a) / (0.7 * s.h * s.h), 1e-12 * e);
  EXPECT_GT(e, 0.0);
}

TEST(EnergyLocalized, UnitCutoffGivesTheFullEnergy) {
  Well s;
  const VectorField a = random_coulomb_field(s.g, 0.3, 2);
  EXPECT_NEAR(energy_localized(a, s.v, s.h, 0.5, ScalarField(s.g, 1.0)), energy(a, s.v, s.h, 0.5), 1e-10);
  EXPECT_NEAR(energy_localized(a, s.v, s.h, 0.5, ScalarField(s.g, 0.0)),
              grad_energy(a) / (0.5 * s.h * s.h), 1e-12);
}

TEST(Current, VanishesForZeroField) {
  Well s;
  const PauliOperator op(s.g, VectorField(s.g), s.v, s.h);
  const SpectralResult sp = negative_spectrum(op, 0.0);
  ASSERT_GT(sp.size(), 0u);
  EXPECT_LT(current_phi(sp, op).max_abs(), 1e-8);
}

TEST(Current, VanishesWithoutNegativeEigenvalues) {
  Well s;
  const PauliOperator op(s.g, random_coulomb_field(s.g, 0.3, 1), ScalarField(s.g, -1.0), s.h);
  EXPECT_EQ(current_phi(negative_spectrum(op, 0.0), op).max_abs(), 0.0);
}

TEST(Current, MatchesCentralDifferenceOfTheTrace) {
  Well s;
  const VectorField a = random_coulomb_field(s.g, 0.3, 4);
  const PauliOperator op(s.g, a, s.v, s.h);
  const SpectralResult sp = negative_spectrum(op, 0.0);
  const VectorField phi = current_phi(sp, op);
  const VectorField da = random_coulomb_field(s.g, 1.0, 17);
  const double eps = 1e-5;
  auto tr = [&](double t) {
    return trace_minus(negative_spectrum(PauliOperator(s.g, a + t * da, s.v, s.h), 0.0)).value;
  };
  const double fd = (tr(eps) - tr(-eps)) / (2 * eps);
  EXPECT_NEAR(phi.dot(da), fd, 1e-3 * std::abs(fd));
}

TEST(Current, SmoothedCurrentMatchesDifferenceOfSmoothedTrace) {
  Well s;
  const VectorField a = random_coulomb_field(s.g, 0.3, 4);
  const SmoothingSpec sm{0.2};
  const PauliOperator op(s.g, a, s.v, s.h);
  const VectorField phi = current_phi(negative_spectrum(op, sm.L), op, sm);
  const VectorField da = random_coulomb_field(s.g, 1.0, 18);
  const double eps = 1e-5;
  auto tr = [&](double t) {
    return smoothed_trace(negative_spectrum(PauliOperator(s.g, a + t * da, s.v, s.h), sm.L), sm);
  };
  const double fd = (tr(eps) - tr(-eps)) / (2 * eps);
  EXPECT_NEAR(phi.dot(da), fd, 1e-3 * std::abs(fd));
}

TEST(ElResidual, ZeroFieldAndZeroCurrentIsZero) {
  Well s;
  EXPECT_EQ(el_residual(VectorField(s.g), VectorField(s.g), 0.5, s.h), 0.0);
}

TEST(ElResidual, ExactPoissonSolveIsStationary) {
  Well s;
  const double kappa = 0.5;
  const VectorField phi = random_coulomb_field(s.g, 0.7, 3);
  const VectorField a = (kappa * s.h * s.h / 2.0) * inverse_laplacian(phi);
  EXPECT_LE(el_residual(a, phi, kappa, s.h), 1e-10);
}

TEST(ElResidual, RandomFieldAgainstItsOwnCurrentIsPositive) {
  Well s;
  const VectorField a = random_coulomb_field(s.g, 0.3, 4);
  const PauliOperator op(s.g, a, s.v, s.h);
  const VectorField phi = current_phi(negative_spectrum(op, 0.0), op);
  EXPECT_GT(el_residual(a, phi, 0.5, s.h), 0.1);
}

TEST(InequalitySuite, NonPositivePotentialHoldsTrivially) {
  Well s;
  const VectorField a = random_coulomb_field(s.g, 0.3, 4);
  const ScalarField v(s.g, -0.2);
  const InequalityReport r =
      inequality_suite(negative_spectrum(PauliOperator(s.g, a, v, s.h), 0.0), a, v, s.h, 0.5);
  EXPECT_TRUE(r.ok);
  EXPECT_EQ(r.trace, 0.0);
  EXPECT_EQ(r.c_lieb_thirring, 0.0);
}

TEST(InequalitySuite, ZeroFieldLiebThirringConstant) {
  Well s;
  const InequalityReport r = inequality_suite(
      negative_spectrum(PauliOperator(s.g, VectorField(s.g), s.v, s.h), 0.0), VectorField(s.g), s.v, s.h, 0.5);
  EXPECT_TRUE(r.ok);
  double v52 = 0.0;
  for (double x : s.v.values())
    if (x > 0) v52 += std::pow(x, 2.5);
  v52 *= s.g.cell_volume();
  EXPECT_NEAR(r.c_lieb_thirring, -r.trace / (v52 / std::pow(s.h, 3)), 1e-12);
  EXPECT_GT(r.c_lieb_thirring, 0.0);
}

TEST(Diagnostics, ZeroField) {
  const Grid g({8, 8, 8}, {2 * kPi, 2 * kPi, 2 * kPi});
  const Diagnostics d = diagnostics(VectorField(g), 0.9, 0.5, 1.0);
  EXPECT_EQ(d.mu, 0.0);
  EXPECT_EQ(d.mu_bar, 1.0);
  EXPECT_EQ(d.grad_norm, 0.0);
}

TEST(Diagnostics, SineFieldHasUnitGradientSup) {
  const Grid g({16, 16, 16}, {2 * kPi, 2 * kPi, 2 * kPi});
  VectorField a(g);
  a[0] = ScalarField::from_function(g, [](const Vec3& x) { return std::sin(x[0]); });
  const Diagnostics d = diagnostics(a, 0.9, 0.5, 1.0);
  EXPECT_NEAR(d.mu, 1.0, 1e-3);
  EXPECT_NEAR(d.varsigma, 0.5 * 1.0 * std::pow(0.9, 1.5), 1e-12);
}
