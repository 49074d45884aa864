#include "paulilab/pauli.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "paulilab/fft.hpp"
#include "paulilab/spectral_ops.hpp"

namespace paulilab {

const std::array<Eigen::Matrix2cd, 3>& PauliMatrices::sigma() {
  static const std::array<Eigen::Matrix2cd, 3> s = [] {
    const Complex I(0, 1);
    std::array<Eigen::Matrix2cd, 3> m;
    m[0] << 0, 1, 1, 0;
    m[1] << 0, -I, I, 0;
    m[2] << 1, 0, 0, -1;
    return m;
  }();
  return s;
}

double min_resolved_h(const Grid& grid) {
  return 4.0 * grid.max_spacing() / std::numbers::pi;
}

PauliOperator::PauliOperator(const Grid& grid, VectorField a, ScalarField v, double h)
    : grid_(grid), a_(std::move(a)), v_(std::move(v)), h_(h), n_(grid.size()) {
  require_same_grid(grid_, a_.grid(), "pauli operator (A)");
  require_same_grid(grid_, v_.grid(), "pauli operator (V)");
  if (!(h > 0.0 && h <= 1.0)) {
    throw std::invalid_argument("pauli operator: h must lie in (0, 1]");
  }
  if (h < min_resolved_h(grid) * (1.0 - 1e-12)) {
    throw std::invalid_argument("pauli operator: h = " + std::to_string(h) +
                                " is below the resolved minimum " +
                                std::to_string(min_resolved_h(grid)));
  }
  if (!a_.all_finite() || !v_.all_finite()) {
    throw std::invalid_argument("pauli operator: non-finite field values");
  }
  std::array<std::vector<double>, 3> k = {wavenumbers(grid, 0), wavenumbers(grid, 1),
                                          wavenumbers(grid, 2)};
  for (auto& c : hk_) c.resize(n_);
  for (std::size_t s = 0; s < n_; ++s) {
    const auto idx = grid.unravel(s);
    for (int ax = 0; ax < 3; ++ax) hk_[ax][s] = h * k[ax][idx[ax]];
  }
}

void PauliOperator::covariant_all(const Complex* u,
                                  std::array<std::vector<Complex>, 3>& w) const {
  const Fft3& fft = Fft3::for_dims(grid_.dims());
  std::vector<Complex> hat(n_);
  for (auto& c : w) c.resize(2 * n_);
  for (int spin = 0; spin < 2; ++spin) {
    const Complex* us = u + spin * n_;
    std::copy(us, us + n_, hat.begin());
    fft.forward(hat.data());
    for (int k = 0; k < 3; ++k) {
      Complex* out = w[k].data() + spin * n_;
      const std::vector<double>& hk = hk_[k];
      for (std::size_t s = 0; s < n_; ++s) out[s] = hk[s] * hat[s];
      fft.backward(out);
      const auto& ak = a_[k];
      for (std::size_t s = 0; s < n_; ++s) out[s] -= ak[s] * us[s];
    }
  }
}

void PauliOperator::apply_q_raw(const Complex* u, Complex* out,
                                std::array<std::vector<Complex>, 3>& w) const {
  covariant_all(u, w);
  const Complex I(0, 1);
  const Complex *wx = w[0].data(), *wy = w[1].data(), *wz = w[2].data();
  for (std::size_t s = 0; s < n_; ++s) {
    const std::size_t t = s + n_;
    out[s] = wx[t] - I * wy[t] + wz[s];
    out[t] = wx[s] + I * wy[s] - wz[t];
  }
}

void PauliOperator::apply_raw(const Complex* u, Complex* out) const {
  std::array<std::vector<Complex>, 3> w;
  std::vector<Complex> qu(2 * n_);
  apply_q_raw(u, qu.data(), w);
  apply_q_raw(qu.data(), out, w);
  for (int spin = 0; spin < 2; ++spin) {
    for (std::size_t s = 0; s < n_; ++s) out[spin * n_ + s] -= v_[s] * u[spin * n_ + s];
  }
}

void PauliOperator::apply(const Eigen::MatrixXcd& x, Eigen::MatrixXcd& y) const {
  if (x.rows() != dim()) throw std::invalid_argument("pauli apply: dimension mismatch");
  y.resize(x.rows(), x.cols());
  for (Eigen::Index c = 0; c < x.cols(); ++c) apply_raw(x.col(c).data(), y.col(c).data());
}

SpinorField PauliOperator::apply(const SpinorField& u) const {
  require_same_grid(grid_, u.grid(), "pauli apply");
  SpinorField out(grid_);
  apply_raw(u.values().data(), out.data().data());
  return out;
}

SpinorField PauliOperator::apply_q(const SpinorField& u) const {
  require_same_grid(grid_, u.grid(), "pauli Q");
  SpinorField out(grid_);
  std::array<std::vector<Complex>, 3> w;
  apply_q_raw(u.values().data(), out.data().data(), w);
  return out;
}

std::array<SpinorField, 3> PauliOperator::covariant_gradient(const SpinorField& u) const {
  require_same_grid(grid_, u.grid(), "covariant derivative");
  std::array<std::vector<Complex>, 3> w;
  covariant_all(u.values().data(), w);
  auto wrap = [&](const std::vector<Complex>& v) {
    return SpinorField(grid_, Eigen::Map<const Eigen::VectorXcd>(
                                  v.data(), static_cast<Eigen::Index>(v.size())));
  };
  return {wrap(w[0]), wrap(w[1]), wrap(w[2])};
}

SpinorField PauliOperator::covariant_derivative(int k, const SpinorField& u) const {
  if (k < 0 || k > 2) throw std::invalid_argument("covariant derivative: axis out of range");
  return covariant_gradient(u)[k];
}

SpinorField PauliOperator::apply_split(const SpinorField& u) const {
  const VectorField b = curl(a_);
  SpinorField out(grid_);
  Eigen::VectorXcd& o = out.data();
  for (int k = 0; k < 3; ++k) {
    o += covariant_derivative(k, covariant_derivative(k, u)).values();
  }
  const Complex I(0, 1);
  const Eigen::VectorXcd& x = u.values();
  for (std::size_t s = 0; s < n_; ++s) {
    const std::size_t t = s + n_;
    // sigma.B = [[B3, B1 - i B2], [B1 + i B2, -B3]]
    const Complex sb1 = b[2][s] * x[s] + (b[0][s] - I * b[1][s]) * x[t];
    const Complex sb2 = (b[0][s] + I * b[1][s]) * x[s] - b[2][s] * x[t];
    o[s] -= h_ * sb1 + v_[s] * x[s];
    o[t] -= h_ * sb2 + v_[s] * x[t];
  }
  return out;
}

PauliOperator assemble(const Grid& grid, const VectorField& a, const ScalarField& v,
                       double h) {
  return PauliOperator(grid, a, v, h);
}

GaugeTransform::GaugeTransform(const ScalarField& chi, double h) : chi_(chi), h_(h) {
  if (!(h > 0.0)) throw std::invalid_argument("gauge transform: h must be positive");
  const auto& n = chi.grid().dims();
  const int max_mode = std::min({n[0], n[1], n[2]}) / 4;
  if (high_mode_fraction(chi, max_mode) > 1e-14) {
    throw std::invalid_argument(
        "gauge transform: chi has unresolved frequencies (modes above n/4)");
  }
}

VectorField GaugeTransform::transform(const VectorField& a) const {
  require_same_grid(a.grid(), chi_.grid(), "gauge transform");
  return a + gradient(chi_);
}

SpinorField GaugeTransform::transform(const SpinorField& u) const {
  require_same_grid(u.grid(), chi_.grid(), "gauge transform");
  const std::size_t n = chi_.size();
  SpinorField out = u;
  for (std::size_t s = 0; s < n; ++s) {
    const Complex phase = std::polar(1.0, chi_[s] / h_);
    out.data()[s] *= phase;
    out.data()[s + n] *= phase;
  }
  return out;
}

}  // namespace paulilab
