#include "paulilab/fields.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace paulilab {

void require_same_grid(const Grid& a, const Grid& b, const char* what) {
  if (!(a == b)) {
    throw std::invalid_argument(std::string(what) + ": grid mismatch");
  }
}

ScalarField::ScalarField(const Grid& grid, double value)
    : grid_(grid), values_(grid.size(), value) {}

ScalarField::ScalarField(const Grid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw std::invalid_argument("scalar field: value count does not match grid");
  }
}

ScalarField ScalarField::from_function(
    const Grid& grid, const std::function<double(const Vec3&)>& f) {
  ScalarField out(grid);
  for (std::size_t s = 0; s < grid.size(); ++s) out[s] = f(grid.position(s));
  return out;
}

double ScalarField::integral() const {
  return std::accumulate(values_.begin(), values_.end(), 0.0) *
         grid_.cell_volume();
}

double ScalarField::max() const {
  return *std::max_element(values_.begin(), values_.end());
}

double ScalarField::min() const {
  return *std::min_element(values_.begin(), values_.end());
}

double ScalarField::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double ScalarField::l2_norm() const {
  double s = 0.0;
  for (double v : values_) s += v * v;
  return std::sqrt(s * grid_.cell_volume());
}

bool ScalarField::all_finite() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](double v) { return std::isfinite(v); });
}

ScalarField& ScalarField::operator+=(const ScalarField& other) {
  require_same_grid(grid_, other.grid_, "scalar field +=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& other) {
  require_same_grid(grid_, other.grid_, "scalar field -=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

ScalarField& ScalarField::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }

ScalarField hadamard(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid(), b.grid(), "hadamard");
  ScalarField out(a.grid());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

VectorField::VectorField(const Grid& grid)
    : comp_{ScalarField(grid), ScalarField(grid), ScalarField(grid)} {}

VectorField::VectorField(ScalarField x, ScalarField y, ScalarField z)
    : comp_{std::move(x), std::move(y), std::move(z)} {
  require_same_grid(comp_[0].grid(), comp_[1].grid(), "vector field");
  require_same_grid(comp_[0].grid(), comp_[2].grid(), "vector field");
}

double VectorField::dot(const VectorField& other) const {
  require_same_grid(grid(), other.grid(), "vector field dot");
  double s = 0.0;
  for (int a = 0; a < 3; ++a) {
    for (std::size_t i = 0; i < comp_[a].size(); ++i) {
      s += comp_[a][i] * other.comp_[a][i];
    }
  }
  return s * grid().cell_volume();
}

double VectorField::l2_norm() const { return std::sqrt(dot(*this)); }

double VectorField::max_abs() const {
  return std::max({comp_[0].max_abs(), comp_[1].max_abs(), comp_[2].max_abs()});
}

bool VectorField::all_finite() const {
  return comp_[0].all_finite() && comp_[1].all_finite() && comp_[2].all_finite();
}

VectorField& VectorField::operator+=(const VectorField& other) {
  for (int a = 0; a < 3; ++a) comp_[a] += other.comp_[a];
  return *this;
}

VectorField& VectorField::operator-=(const VectorField& other) {
  for (int a = 0; a < 3; ++a) comp_[a] -= other.comp_[a];
  return *this;
}

VectorField& VectorField::operator*=(double s) {
  for (auto& c : comp_) c *= s;
  return *this;
}

VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
VectorField operator*(double s, VectorField a) { return a *= s; }

SpinorField::SpinorField(const Grid& grid)
    : grid_(grid), values_(Eigen::VectorXcd::Zero(2 * grid.size())) {}

SpinorField::SpinorField(const Grid& grid, Eigen::VectorXcd values)
    : grid_(grid), values_(std::move(values)) {
  if (static_cast<std::size_t>(values_.size()) != 2 * grid_.size()) {
    throw std::invalid_argument("spinor field: value count does not match grid");
  }
}

Complex SpinorField::inner(const SpinorField& other) const {
  require_same_grid(grid_, other.grid_, "spinor inner product");
  return values_.dot(other.values_) * grid_.cell_volume();
}

double SpinorField::norm() const {
  return std::sqrt(values_.squaredNorm() * grid_.cell_volume());
}

}  // namespace paulilab
