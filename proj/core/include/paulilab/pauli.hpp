#pragma once

#include <array>
#include <vector>

#include <Eigen/Core>

#include "paulilab/fields.hpp"
#include "paulilab/linear_operator.hpp"

namespace paulilab {

struct PauliMatrices {
  /// sigma_1, sigma_2, sigma_3 in the standard representation.
  static const std::array<Eigen::Matrix2cd, 3>& sigma();
};

/// Smallest admissible semiclassical parameter for a grid: 4 max_spacing / pi.
double min_resolved_h(const Grid& grid);

/// Discrete Pauli operator H = ((hD - A).sigma)^2 - V on the periodic grid.
///
/// D = -i d/dx is applied spectrally (Nyquist mode dropped, so D is
/// Hermitian); A and V act pointwise. H is applied as Q(Qu) - Vu with
/// Q = sum_k sigma_k (hD_k - A_k), which makes it exactly Hermitian and
/// bounded below by -max V. Vectors are spin-major, length 2 * sites.
class PauliOperator : public LinearOperator {
 public:
  /// Throws std::invalid_argument on grid mismatch, h outside (0, 1], or
  /// h below min_resolved_h(grid).
  PauliOperator(const Grid& grid, VectorField a, ScalarField v, double h);

  Eigen::Index dim() const override { return 2 * static_cast<Eigen::Index>(n_); }
  void apply(const Eigen::MatrixXcd& x, Eigen::MatrixXcd& y) const override;

  SpinorField apply(const SpinorField& u) const;
  /// Q u = sum_k sigma_k (hD_k - A_k) u.
  SpinorField apply_q(const SpinorField& u) const;
  /// (hD_k - A_k) u, axis k in {0, 1, 2}.
  SpinorField covariant_derivative(int k, const SpinorField& u) const;
  /// All three covariant derivatives at once.
  std::array<SpinorField, 3> covariant_gradient(const SpinorField& u) const;
  /// Same operator evaluated as sum_k (hD_k - A_k)^2 u - h sigma.B u - V u,
  /// B = curl A. Agrees with apply() up to aliasing of products.
  SpinorField apply_split(const SpinorField& u) const;

  const Grid& grid() const { return grid_; }
  const VectorField& a() const { return a_; }
  const ScalarField& v() const { return v_; }
  double h() const { return h_; }

 private:
  // w[k] = (hD_k - A_k) u for raw spin-major vectors.
  void covariant_all(const Complex* u, std::array<std::vector<Complex>, 3>& w) const;
  void apply_q_raw(const Complex* u, Complex* out,
                   std::array<std::vector<Complex>, 3>& w) const;
  void apply_raw(const Complex* u, Complex* out) const;

  Grid grid_;
  VectorField a_;
  ScalarField v_;
  double h_;
  std::size_t n_;
  std::array<std::vector<double>, 3> hk_;  // h * wavenumber per site, FFT order
};

PauliOperator assemble(const Grid& grid, const VectorField& a,
                       const ScalarField& v, double h);

/// Gauge change A' = A + grad chi with spinor map u -> exp(i chi / h) u.
class GaugeTransform {
 public:
  /// Throws std::invalid_argument when chi carries modes above n/4 on any
  /// axis (aliasing guard).
  GaugeTransform(const ScalarField& chi, double h);

  VectorField transform(const VectorField& a) const;
  SpinorField transform(const SpinorField& u) const;
  const ScalarField& chi() const { return chi_; }

 private:
  ScalarField chi_;
  double h_;
};

}  // namespace paulilab
