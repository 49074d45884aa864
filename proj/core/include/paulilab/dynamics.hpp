#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "paulilab/potential.hpp"

namespace paulilab {

/// Phase-space point of the classical flow of H(x, xi) = |xi|^2 - V(x).
struct PhasePoint {
  Vec3 x{};
  Vec3 xi{};
};

double classical_energy(const Potential& v, const PhasePoint& p);

struct Trajectory {
  std::vector<double> t;
  std::vector<PhasePoint> points;
  double energy_drift = 0.0;  // max |H(t) - H(0)| / max(1, |H(0)|)
};

/// Fourth-order symplectic (Yoshida) integration of x' = 2 xi, xi' = grad V
/// with ceil(T / step) equal steps. Throws std::runtime_error when the
/// energy error exceeds 1e-3 relative or the state stops being finite.
Trajectory flow(const Potential& v, const PhasePoint& start, double horizon, double step);

struct FlowConfig {
  PotentialSpec potential;
  double tau = 0.0;          // energy level
  double step = 1e-3;
  double horizon = 4.0;      // T
  double rho = 1e-2;         // return radius in phase space
  double min_return_time = 0.5;
  int samples = 1000;
  std::uint64_t seed = 1;
  double sample_box = 2.0;   // x sampled in [-b, b]^3
  int workers = 1;
};

struct SampleOutcome {
  PhasePoint start;
  std::optional<double> return_time;
  double energy_drift = 0.0;
};

struct MeasureEstimate {
  double estimate = 0.0;  // fraction of returning samples
  double lower = 0.0;     // Wilson 95% interval
  double upper = 0.0;
  int returns = 0;
  int samples = 0;
  double shell_volume = 0.0;  // integral of 2 pi sqrt(V + tau)_+ dx (Monte Carlo)
  double max_energy_drift = 0.0;
  std::vector<SampleOutcome> outcomes;
};

/// Throws std::invalid_argument for step > rho / 10, fewer than 100 samples
/// or an empty energy shell inside the sampling box.
MeasureEstimate periodic_measure(const FlowConfig& config);

nlohmann::json to_json(const MeasureEstimate& m);
void write_outcomes_csv(const MeasureEstimate& m, const std::filesystem::path& path);

}  // namespace paulilab
