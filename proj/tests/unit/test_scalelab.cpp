#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "paulilab/scalelab.hpp"

using namespace paulilab;

TEST(Rescale, HalvingGamma) {
  const ScalePair p = rescale(0.1, 2.0, 0.5);
  EXPECT_DOUBLE_EQ(p.h, 0.2);
  EXPECT_DOUBLE_EQ(p.kappa, 1.0);
  const ScalePair same = rescale(0.3, 0.7, 1.0);
  EXPECT_DOUBLE_EQ(same.h, 0.3);
  EXPECT_DOUBLE_EQ(same.kappa, 0.7);
}

TEST(Rescale, PreservesTheFieldCoupling) {
  for (double gamma : {0.9, 0.5, 0.25}) {
    const double h = 0.2, kappa = 1.5;
    const ScalePair p = rescale(h, kappa, gamma);
    EXPECT_NEAR(1.0 / (p.kappa * p.h * p.h), gamma / (kappa * h * h), 1e-9);
  }
}

TEST(Rescale, RejectsOutOfRangeGamma) {
  EXPECT_THROW(rescale(0.5, 1.0, 0.25), std::invalid_argument);
  EXPECT_THROW(rescale(0.5, 1.0, 1.5), std::invalid_argument);
  EXPECT_THROW(rescale(0.5, 1.0, 0.0), std::invalid_argument);
}

TEST(GammaChoice, UnitKappa) {
  const double h = 0.01, alpha = 0.5, beta = 1.0;
  const GammaChoice g = gamma_choice(1.0, h, alpha, beta);
  EXPECT_NEAR(g.gamma, std::pow(h, alpha / (alpha + beta + 1)), 1e-12);
  EXPECT_NEAR(g.after, 1.0, 1e-12);
  EXPECT_TRUE(g.in_range);
}

TEST(GammaChoice, FlagsAFailedPrecondition) {
  const GammaChoice g = gamma_choice(10.0, 0.5, 0.0, 1.0);
  EXPECT_TRUE(g.precondition_failed_before);
  EXPECT_NEAR(g.after, 1.0, 1e-12);
}

TEST(Recurrence, ExactSteps) {
  const Recurrence r = alpha_recurrence(Rational(1, 2), 3);
  ASSERT_EQ(r.steps.size(), 4u);
  EXPECT_EQ(r.steps[1].alpha, Rational(-1, 10));
  EXPECT_EQ(r.steps[2].alpha, Rational(-29, 50));
  for (const auto& s : r.steps) EXPECT_EQ(s.alpha + s.beta, Rational(3, 2));
  ASSERT_TRUE(r.first_negative.has_value());
  EXPECT_EQ(*r.first_negative, 1);
}

TEST(Recurrence, FixedPoint) {
  const Rational f = alpha_fixed_point();
  EXPECT_EQ(f, Rational(-5, 2));
  const Recurrence r = alpha_recurrence(f, 4);
  for (const auto& s : r.steps) EXPECT_EQ(s.alpha, f);
}

TEST(Recurrence, ParsesAndPrintsRationals) {
  EXPECT_EQ(parse_rational("7/10"), Rational(7, 10));
  EXPECT_EQ(parse_rational("-3"), Rational(-3));
  EXPECT_EQ(to_string(Rational(-113, 250)), "-113/250");
  EXPECT_THROW(parse_rational("0.5"), std::invalid_argument);
}

TEST(KappaStar, MatchesTheClosedForm) {
  const double h = 0.01;
  const double want = std::pow(h, -0.25) * std::pow(std::abs(std::log(h)), -0.75);
  EXPECT_NEAR(kappa_star(h), want, 1e-12);
  EXPECT_NEAR(kappa_star(h), 1.006, 1e-3);
  EXPECT_NEAR(kappa_star(h, 2.0), 2.0 * want, 1e-12);
}

TEST(PredictedRemainder, Regimes) {
  const RemainderPrediction weak = predicted_remainder(0.5, 0.1);
  EXPECT_EQ(weak.regime, "weak-coupling");
  EXPECT_NEAR(weak.kappa_squared, 0.25 / 0.1, 1e-12);
  EXPECT_FALSE(weak.log_form.has_value());
  EXPECT_EQ(weak.form, "kappa_squared");
  EXPECT_EQ(predicted_remainder(2.0, 0.1).regime, "intermediate");
  EXPECT_EQ(predicted_remainder(6.0, 0.1).regime, "near-critical");
  const RemainderPrediction mid = predicted_remainder(2.0, 0.1);
  ASSERT_TRUE(mid.log_form.has_value());
  EXPECT_DOUBLE_EQ(mid.value, std::min(mid.kappa_squared, *mid.log_form));
}

TEST(FitExponent, PureInversePower) {
  std::vector<FitPoint> pts;
  for (double h : {0.8, 0.4, 0.2, 0.1}) pts.push_back({h, 2.0 / h});
  const FitResult f = fit_exponent(pts, "test");
  EXPECT_NEAR(f.fit.p, 1.0, 1e-12);
  EXPECT_NEAR(f.fit.constant, 2.0, 1e-12);
  EXPECT_NEAR(f.fit.residual, 0.0, 1e-12);
  EXPECT_EQ(f.label, "test");
}

TEST(FitExponent, PerturbedPowerStaysNearOne) {
  std::vector<FitPoint> pts;
  for (double h : {0.9, 0.7, 0.5, 0.35, 0.25, 0.18})
    pts.push_back({h, -(1.0 + 0.05 * std::sin(7.0 * h)) / h});
  const FitResult f = fit_exponent(pts);
  EXPECT_GE(f.fit.p, 0.9);
  EXPECT_LE(f.fit.p, 1.1);
}

TEST(FitExponent, NeedsThreePoints) {
  EXPECT_THROW(fit_exponent({{0.5, 1.0}, {0.25, 2.0}}), std::invalid_argument);
  EXPECT_THROW(fit_exponent({{0.5, 1.0}, {0.5, 2.0}, {0.5, 3.0}}), std::invalid_argument);
}
