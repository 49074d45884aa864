#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "paulilab/selfgen.hpp"

namespace paulilab {

struct MinimizeOptions {
  double mixing = 0.5;           // initial beta
  double min_mixing = 1e-6;      // give up below this step
  int max_iterations = 200;
  double tolerance = 1e-3;       // on el_residual
  double line_search_tol = 1e-10;
  /// Max amplitude of the seeded divergence-free start (A = 0 is always
  /// stationary, so the iteration starts slightly off it). 0 starts at A = 0.
  double initial_amplitude = 1e-2;
  std::uint64_t seed = 1;
  std::optional<VectorField> initial;  // overrides the seeded start
  EnergyOptions energy;
  /// Smoothing scale used once the spectrum becomes threshold-ambiguous,
  /// as a multiple of h^2.
  double smoothing_factor = 10.0;
  /// When set, the state is written here after every accepted step and read
  /// back on start if present.
  std::optional<std::filesystem::path> checkpoint;
};

struct HistoryEntry {
  int iteration = 0;
  double energy = 0.0;
  double residual = 0.0;
  double mixing = 0.0;
};

struct MinimizerState {
  VectorField a;
  SpectralResult spectral;
  double energy = 0.0;        // trace_term + field_term
  double trace_term = 0.0;
  double trace_minus = 0.0;   // plain Tr^- at the final A
  double smoothed_trace = 0.0;
  bool smoothed = false;
  double field_energy = 0.0;  // integral |dA|^2
  double energy_zero = 0.0;   // E(0) with the same functional
  double el_residual = 0.0;
  int iteration = 0;
  double mixing = 0.0;
  bool converged = false;
  bool restarted_from_zero = false;
  std::vector<HistoryEntry> history;
  std::string message;

  explicit MinimizerState(const Grid& g) : a(g) {}
};

/// Seeded random divergence-free, zero-mean field on the lowest Fourier
/// modes, scaled to the given max amplitude.
VectorField random_coulomb_field(const Grid& grid, double amplitude, std::uint64_t seed,
                                 int max_mode = 2);

/// Damped fixed-point iteration A <- (1 - b) A + b (kappa h^2 / 2w) lap^-1 P Phi(A)
/// in Coulomb gauge, with b halved whenever the energy would increase.
MinimizerState minimize(const ScalarField& v, double h, double kappa,
                        const MinimizeOptions& options = {});

nlohmann::json to_json(const MinimizerState& s);
void save_checkpoint(const MinimizerState& s, const std::filesystem::path& dir);
std::optional<VectorField> load_checkpoint_field(const std::filesystem::path& dir,
                                                 const Grid& grid);

}  // namespace paulilab
