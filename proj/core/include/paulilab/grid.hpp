#pragma once

#include <array>
#include <cstddef>

namespace paulilab {

using Vec3 = std::array<double, 3>;

/// Periodic box discretized by n1 x n2 x n3 sites.
///
/// Site (i, j, k) sits at ((i - n1/2) d1, (j - n2/2) d2, (k - n3/2) d3), so the
/// origin is always a grid site and the box spans [-L/2, L/2). Storage order
/// is row-major: the last index runs fastest.
class Grid {
 public:
  /// Throws std::invalid_argument when any axis has fewer than four sites or
  /// a non-positive length.
  Grid(std::array<int, 3> dims, Vec3 box);

  const std::array<int, 3>& dims() const { return dims_; }
  const Vec3& box() const { return box_; }
  int dim(int axis) const { return dims_[axis]; }
  double length(int axis) const { return box_[axis]; }
  double spacing(int axis) const { return box_[axis] / dims_[axis]; }
  Vec3 spacings() const { return {spacing(0), spacing(1), spacing(2)}; }
  double max_spacing() const;

  std::size_t size() const {
    return static_cast<std::size_t>(dims_[0]) * dims_[1] * dims_[2];
  }
  double cell_volume() const { return spacing(0) * spacing(1) * spacing(2); }
  double volume() const { return box_[0] * box_[1] * box_[2]; }

  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * dims_[1] + j) * dims_[2] + k;
  }
  std::array<int, 3> unravel(std::size_t site) const;

  double coordinate(int axis, int i) const {
    return (i - dims_[axis] / 2) * spacing(axis);
  }
  Vec3 position(std::size_t site) const;

  /// Shortest periodic displacement between two points along one axis.
  double periodic_delta(int axis, double a, double b) const;

  bool operator==(const Grid& other) const = default;

 private:
  std::array<int, 3> dims_;
  Vec3 box_;
};

Grid build_grid(std::array<int, 3> dims, Vec3 box);

}  // namespace paulilab
