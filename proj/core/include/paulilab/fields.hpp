#pragma once

#include <array>
#include <complex>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "paulilab/grid.hpp"

namespace paulilab {

using Complex = std::complex<double>;

/// Real value per grid site. Integrals are site sums times the cell volume.
class ScalarField {
 public:
  explicit ScalarField(const Grid& grid, double value = 0.0);
  ScalarField(const Grid& grid, std::vector<double> values);

  static ScalarField from_function(const Grid& grid,
                                   const std::function<double(const Vec3&)>& f);

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  std::vector<double>& data() { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  double integral() const;
  double max() const;
  double min() const;
  double max_abs() const;
  /// sqrt of the integral of the square.
  double l2_norm() const;
  bool all_finite() const;

  ScalarField& operator+=(const ScalarField& other);
  ScalarField& operator-=(const ScalarField& other);
  ScalarField& operator*=(double s);

 private:
  Grid grid_;
  std::vector<double> values_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);
/// Pointwise product.
ScalarField hadamard(const ScalarField& a, const ScalarField& b);

/// Three real components per site (vector potential, magnetic field, current).
class VectorField {
 public:
  explicit VectorField(const Grid& grid);
  VectorField(ScalarField x, ScalarField y, ScalarField z);

  const Grid& grid() const { return comp_[0].grid(); }
  ScalarField& operator[](int axis) { return comp_[axis]; }
  const ScalarField& operator[](int axis) const { return comp_[axis]; }

  /// Sum over components of the component integrals of products.
  double dot(const VectorField& other) const;
  double l2_norm() const;
  double max_abs() const;
  bool all_finite() const;

  VectorField& operator+=(const VectorField& other);
  VectorField& operator-=(const VectorField& other);
  VectorField& operator*=(double s);

 private:
  std::array<ScalarField, 3> comp_;
};

VectorField operator+(VectorField a, const VectorField& b);
VectorField operator-(VectorField a, const VectorField& b);
VectorField operator*(double s, VectorField a);

/// Two complex components per site. Storage is spin-major: all sites of the
/// first component, then all sites of the second.
class SpinorField {
 public:
  explicit SpinorField(const Grid& grid);
  SpinorField(const Grid& grid, Eigen::VectorXcd values);

  const Grid& grid() const { return grid_; }
  const Eigen::VectorXcd& values() const { return values_; }
  Eigen::VectorXcd& data() { return values_; }
  Complex component(int spin, std::size_t site) const {
    return values_[spin * grid_.size() + site];
  }

  /// Weighted inner product <this, other> = sum conj(u) v dV.
  Complex inner(const SpinorField& other) const;
  double norm() const;

 private:
  Grid grid_;
  Eigen::VectorXcd values_;
};

/// Checks that two fields live on the same grid; throws std::invalid_argument.
void require_same_grid(const Grid& a, const Grid& b, const char* what);

}  // namespace paulilab
