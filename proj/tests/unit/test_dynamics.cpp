#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "paulilab/dynamics.hpp"

using namespace paulilab;

namespace {

Potential harmonic(double omega) {
  PotentialSpec ps;
  ps.preset = "harmonic";
  ps.params = {{"v0", 1.0}, {"omega", omega}};
  return Potential(ps);
}

FlowConfig anharmonic(double rho) {
  FlowConfig c;
  c.potential.preset = "anharmonic";
  c.potential.params = {{"coupling", 0.3}};
  c.rho = rho;
  c.horizon = 4.0;
  return c;
}

}  // namespace

TEST(Flow, HarmonicOrbitReturnsAfterHalfPeriod) {
  const PhasePoint start{{0.3, -0.2, 0.1}, {0.5, 0.0, -0.4}};
  const Trajectory t = flow(harmonic(1.0), start, std::numbers::pi, 1e-3);
  const PhasePoint& end = t.points.back();
  EXPECT_NEAR(t.t.back(), std::numbers::pi, 1e-12);
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(end.x[i], start.x[i], 1e-6);
    EXPECT_NEAR(end.xi[i], start.xi[i], 1e-6);
  }
}

TEST(Flow, ConstantPotentialMovesOnStraightLines) {
  const PhasePoint start{{0.1, 0.2, 0.3}, {1.0, -0.5, 0.25}};
  const Trajectory t = flow(harmonic(0.0), start, 2.0, 0.01);
  const PhasePoint& end = t.points.back();
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(end.x[i], start.x[i] + 2.0 * 2.0 * start.xi[i], 1e-12);
    EXPECT_DOUBLE_EQ(end.xi[i], start.xi[i]);
  }
}

TEST(Flow, AnharmonicEnergyIsConservedOverLongTimes) {
  PotentialSpec ps;
  ps.preset = "anharmonic";
  ps.params = {{"coupling", 0.3}};
  const Trajectory t = flow(Potential(ps), {{0.4, 0.1, -0.2}, {0.3, 0.2, 0.1}}, 50.0, 1e-3);
  EXPECT_LE(t.energy_drift, 1e-6);
}

TEST(PeriodicMeasure, HarmonicEverythingReturns) {
  FlowConfig c;
  c.potential.preset = "harmonic";
  c.rho = 1e-2;
  c.step = 1e-3;
  c.samples = 200;
  const MeasureEstimate m = periodic_measure(c);
  EXPECT_EQ(m.returns, m.samples);
  EXPECT_DOUBLE_EQ(m.estimate, 1.0);
  EXPECT_LE(m.lower, 1.0);
}

TEST(PeriodicMeasure, ShrinkingRadiusLowersTheEstimate) {
  double prev = 2.0;
  for (double rho : {0.2, 0.1, 0.05}) {
    const MeasureEstimate m = periodic_measure(anharmonic(rho));
    EXPECT_LE(m.estimate, prev) << rho;
    EXPECT_LE(m.lower, m.estimate);
    EXPECT_GE(m.upper, m.estimate);
    prev = m.estimate;
  }
}

TEST(PeriodicMeasure, SeededRunIsReproducible) {
  const MeasureEstimate a = periodic_measure(anharmonic(0.1));
  const MeasureEstimate b = periodic_measure(anharmonic(0.1));
  EXPECT_EQ(a.returns, b.returns);
  EXPECT_NEAR(a.estimate, 0.478, 1e-12);
}

TEST(PeriodicMeasure, RejectsBadSettings) {
  FlowConfig c = anharmonic(0.1);
  c.step = 0.05;
  EXPECT_THROW(periodic_measure(c), std::invalid_argument);
  c = anharmonic(0.1);
  c.samples = 50;
  EXPECT_THROW(periodic_measure(c), std::invalid_argument);
  c = anharmonic(0.1);
  c.tau = -100.0;
  EXPECT_THROW(periodic_measure(c), std::invalid_argument);
}
