#include "paulilab/potential.hpp"

#include <cmath>
#include <stdexcept>

#include "paulilab/expression.hpp"

namespace paulilab {

namespace {

const std::map<std::string, std::map<std::string, double>>& defaults_table() {
  static const std::map<std::string, std::map<std::string, double>> table = {
      {"constant", {{"v0", 1.0}}},
      {"gaussian_well",
       {{"amplitude", 4.0}, {"width", 1.0}, {"floor", -0.5},
        {"width_x", 0.0}, {"width_y", 0.0}, {"width_z", 0.0},
        {"coupling", 0.0}}},
      {"harmonic", {{"v0", 1.0}, {"omega", 1.0}}},
      {"anharmonic", {{"v0", 1.0}, {"omega", 1.0}, {"coupling", 0.3}}},
      {"harmonic_capped", {{"v0", 1.0}, {"omega", 1.0}, {"floor", -0.5}}},
      {"custom", {}},
  };
  return table;
}

// Quartic coupling x^2 y^2 + y^2 z^2 + z^2 x^2 and its gradient.
double quartic(const Vec3& x) {
  const double a = x[0] * x[0], b = x[1] * x[1], c = x[2] * x[2];
  return a * b + b * c + c * a;
}

Vec3 quartic_gradient(const Vec3& x) {
  const double a = x[0] * x[0], b = x[1] * x[1], c = x[2] * x[2];
  return {2 * x[0] * (b + c), 2 * x[1] * (a + c), 2 * x[2] * (a + b)};
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& [name, _] : defaults_table()) out.push_back(name);
  return out;
}

std::map<std::string, double> preset_defaults(const std::string& preset) {
  const auto it = defaults_table().find(preset);
  if (it == defaults_table().end()) {
    throw std::invalid_argument("unknown potential preset '" + preset + "'");
  }
  return it->second;
}

Potential::Potential(const PotentialSpec& spec)
    : preset_(spec.preset), params_(preset_defaults(spec.preset)) {
  for (const auto& [k, v] : spec.params) {
    if (preset_ != "custom" && !params_.count(k)) {
      throw std::invalid_argument("preset '" + preset_ +
                                  "' has no parameter '" + k + "'");
    }
    params_[k] = v;
  }
  const auto& p = params_;

  if (preset_ == "constant") {
    const double v0 = p.at("v0");
    value_ = [v0](const Vec3&) { return v0; };
    gradient_ = [](const Vec3&) { return Vec3{0, 0, 0}; };
  } else if (preset_ == "gaussian_well") {
    const double amp = p.at("amplitude"), floor = p.at("floor");
    const double s = p.at("coupling");
    Vec3 w;
    const char* keys[] = {"width_x", "width_y", "width_z"};
    for (int a = 0; a < 3; ++a) {
      w[a] = p.at(keys[a]) > 0 ? p.at(keys[a]) : p.at("width");
      if (!(w[a] > 0)) throw std::invalid_argument("gaussian_well: width must be positive");
    }
    auto q = [w, s](const Vec3& x) {
      double e = 0;
      for (int a = 0; a < 3; ++a) e += x[a] * x[a] / (2 * w[a] * w[a]);
      return e + s * quartic(x);
    };
    value_ = [=](const Vec3& x) { return floor + amp * std::exp(-q(x)); };
    gradient_ = [=](const Vec3& x) {
      const double g = -amp * std::exp(-q(x));
      const Vec3 dq4 = quartic_gradient(x);
      Vec3 out;
      for (int a = 0; a < 3; ++a) out[a] = g * (x[a] / (w[a] * w[a]) + s * dq4[a]);
      return out;
    };
  } else if (preset_ == "harmonic" || preset_ == "anharmonic") {
    const double v0 = p.at("v0"), w2 = p.at("omega") * p.at("omega");
    const double s = preset_ == "anharmonic" ? p.at("coupling") : 0.0;
    value_ = [=](const Vec3& x) {
      return v0 - w2 * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) - s * quartic(x);
    };
    gradient_ = [=](const Vec3& x) {
      const Vec3 dq4 = quartic_gradient(x);
      return Vec3{-2 * w2 * x[0] - s * dq4[0], -2 * w2 * x[1] - s * dq4[1],
                  -2 * w2 * x[2] - s * dq4[2]};
    };
  } else if (preset_ == "harmonic_capped") {
    const double v0 = p.at("v0"), w2 = p.at("omega") * p.at("omega");
    const double floor = p.at("floor");
    value_ = [=](const Vec3& x) {
      return std::max(v0 - w2 * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]), floor);
    };
    gradient_ = [=](const Vec3& x) {
      if (v0 - w2 * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) <= floor)
        return Vec3{0, 0, 0};
      return Vec3{-2 * w2 * x[0], -2 * w2 * x[1], -2 * w2 * x[2]};
    };
  } else {
    if (spec.expression.empty()) {
      throw std::invalid_argument("custom potential needs an expression");
    }
    const Expression e = Expression::parse(spec.expression, params_);
    value_ = e;
    // Fourth-order central differences.
    gradient_ = [e](const Vec3& x) {
      const double d = 1e-3;
      Vec3 out;
      for (int a = 0; a < 3; ++a) {
        auto at = [&](double t) {
          Vec3 y = x;
          y[a] += t;
          return e(y);
        };
        out[a] = (8 * (at(d) - at(-d)) - (at(2 * d) - at(-2 * d))) / (12 * d);
      }
      return out;
    };
  }
}

ScalarField sample_potential(const Potential& v, const Grid& grid) {
  ScalarField out = ScalarField::from_function(grid, [&](const Vec3& x) { return v(x); });
  if (v.preset() == "constant") return out;
  for (std::size_t s = 0; s < grid.size(); ++s) {
    const auto idx = grid.unravel(s);
    if (idx[0] != 0 && idx[1] != 0 && idx[2] != 0) continue;
    if (!(out[s] < 0.0)) {
      throw std::invalid_argument("potential '" + v.preset() +
                                  "' is not negative on the box faces; enlarge the box");
    }
  }
  return out;
}

ScalarField sample_potential(const PotentialSpec& spec, const Grid& grid) {
  return sample_potential(Potential(spec), grid);
}

}  // namespace paulilab
