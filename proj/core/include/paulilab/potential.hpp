#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "paulilab/fields.hpp"

namespace paulilab {

/// Named potential family plus parameter overrides. Unset parameters take
/// the preset defaults (see `preset_defaults`).
struct PotentialSpec {
  std::string preset = "gaussian_well";
  std::map<std::string, double> params;
  /// Only for preset "custom": expression in x, y, z, r and the params.
  std::string expression;
};

/// Presets:
///   constant        V = v0
///   gaussian_well   V = floor + amplitude exp(-q), q = sum x_i^2 / (2 w_i^2)
///                   + coupling (x^2 y^2 + y^2 z^2 + z^2 x^2); w_i default to width
///   harmonic        V = v0 - omega^2 |x|^2
///   anharmonic      V = v0 - omega^2 |x|^2 - coupling (x^2 y^2 + y^2 z^2 + z^2 x^2)
///   harmonic_capped V = max(v0 - omega^2 |x|^2, floor)
///   custom          expression
std::vector<std::string> preset_names();
std::map<std::string, double> preset_defaults(const std::string& preset);

/// Analytic potential with its gradient, usable off-grid (classical flow).
class Potential {
 public:
  /// Throws std::invalid_argument for unknown presets or parameter names and
  /// ExpressionError for malformed custom expressions.
  explicit Potential(const PotentialSpec& spec);

  double operator()(const Vec3& x) const { return value_(x); }
  Vec3 gradient(const Vec3& x) const { return gradient_(x); }
  const std::string& preset() const { return preset_; }
  const std::map<std::string, double>& params() const { return params_; }

 private:
  std::string preset_;
  std::map<std::string, double> params_;
  std::function<double(const Vec3&)> value_;
  std::function<Vec3(const Vec3&)> gradient_;
};

/// Samples the potential on the grid. Non-constant presets must be negative
/// on every site of the box faces, otherwise std::invalid_argument.
ScalarField sample_potential(const Potential& v, const Grid& grid);
ScalarField sample_potential(const PotentialSpec& spec, const Grid& grid);

}  // namespace paulilab
