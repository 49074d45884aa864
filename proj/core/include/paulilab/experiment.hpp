#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "paulilab/dynamics.hpp"
#include "paulilab/grid.hpp"
#include "paulilab/minimizer.hpp"
#include "paulilab/potential.hpp"

namespace paulilab {

/// Validation failure pointing at a place in the config text.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& source, int line, int column, const std::string& path,
              const std::string& message);

  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& path() const { return path_; }
  const std::string& detail() const { return detail_; }

 private:
  int line_;
  int column_;
  std::string path_;
  std::string detail_;
};

/// Line and column (1-based) of every value in a JSON document, keyed by
/// JSON pointer ("" for the root, "/a/0/b" for nested entries).
std::map<std::string, std::pair<int, int>> locate_json_values(const std::string& text);

struct CutoffConfig {
  Vec3 center{0.0, 0.0, 0.0};
  double radius = 2.0;
  double taper = 0.5;
};

struct ConstantsConfig {
  double c = 1.0;        // small constants of the rescaling rules
  double big_c = 1.0;    // C in predicted remainders
  double epsilon = 1.0;  // kappa* prefactor
};

struct ExperimentConfig {
  PotentialSpec potential;
  std::array<int, 3> dims{16, 16, 16};
  Vec3 box{7.2, 7.2, 7.2};
  std::vector<double> h_values{0.9, 0.75, 0.6};
  std::vector<double> kappa_values{0.5};

  // Minimizer and solver. `smoothing_L` forces the smoothed trace with that
  // scale; unset lets the minimizer switch it on when the spectrum is
  // ambiguous at 0.
  double mixing = 0.5;
  double min_mixing = 1e-6;
  int max_iterations = 200;
  double tolerance = 1e-3;
  double initial_amplitude = 1e-2;
  double smoothing_factor = 10.0;
  double field_weight = 1.0;
  std::optional<double> smoothing_L;
  std::string solver = "auto";
  int dense_max_sites = 216;
  double ambiguity = 1e-6;
  int block_size = 4;
  int blocks_per_cycle = 24;
  double krylov_tol = 1e-10;

  double weyl_tau = 0.0;
  double kappa1 = 0.0;
  double kappa2 = 0.0;

  std::optional<CutoffConfig> cutoff;
  std::optional<double> partition_gamma;
  FlowConfig dynamics;  // potential defaults to `potential`
  ConstantsConfig constants;
  double m_ref = 1.0;
  double theta = 1.5;

  std::filesystem::path output = "results";
  std::uint64_t seed = 1;
  int workers = 1;

  Grid grid() const { return Grid(dims, box); }
  SolverOptions solver_options() const;
  MinimizeOptions minimize_options(std::uint64_t point_seed) const;
};

/// Parses and validates a config document. `source` names the document in
/// error messages. Unknown keys are errors; missing keys take the defaults.
ExperimentConfig parse_config(const std::string& text, const std::string& source = "config");
ExperimentConfig load_config(const std::filesystem::path& path);

/// Full config with every default written out.
nlohmann::json to_json(const ExperimentConfig& c);

/// Content of the config that affects the numbers of one (h, kappa) point
/// (output directory and worker count are excluded).
nlohmann::json numeric_content(const ExperimentConfig& c);

}  // namespace paulilab
