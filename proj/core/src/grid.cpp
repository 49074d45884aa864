#include "paulilab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace paulilab {

Grid::Grid(std::array<int, 3> dims, Vec3 box) : dims_(dims), box_(box) {
  for (int a = 0; a < 3; ++a) {
    if (dims[a] < 4) {
      throw std::invalid_argument("grid: axis " + std::to_string(a) +
                                  " needs at least 4 sites, got " +
                                  std::to_string(dims[a]));
    }
    if (!(box[a] > 0.0) || !std::isfinite(box[a])) {
      throw std::invalid_argument("grid: box length on axis " +
                                  std::to_string(a) + " must be positive");
    }
  }
}

double Grid::max_spacing() const {
  return std::max({spacing(0), spacing(1), spacing(2)});
}

std::array<int, 3> Grid::unravel(std::size_t site) const {
  const int k = static_cast<int>(site % dims_[2]);
  const std::size_t rest = site / dims_[2];
  const int j = static_cast<int>(rest % dims_[1]);
  const int i = static_cast<int>(rest / dims_[1]);
  return {i, j, k};
}

Vec3 Grid::position(std::size_t site) const {
  const auto ijk = unravel(site);
  return {coordinate(0, ijk[0]), coordinate(1, ijk[1]), coordinate(2, ijk[2])};
}

double Grid::periodic_delta(int axis, double a, double b) const {
  const double L = box_[axis];
  double d = std::fmod(a - b, L);
  if (d >= 0.5 * L) d -= L;
  if (d < -0.5 * L) d += L;
  return d;
}

Grid build_grid(std::array<int, 3> dims, Vec3 box) { return Grid(dims, box); }

}  // namespace paulilab
