#include "paulilab/weyl.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "paulilab/spectral_ops.hpp"

namespace paulilab {

namespace {

constexpr double kPi = std::numbers::pi;

double positive_power(double x, double p) { return x > 0.0 ? std::pow(x, p) : 0.0; }

double coarse_integral(const ScalarField& f) {
  const Grid& g = f.grid();
  for (int a = 0; a < 3; ++a)
    if (g.dim(a) % 2) return f.integral();
  double s = 0.0;
  for (int i = 0; i < g.dim(0); i += 2)
    for (int j = 0; j < g.dim(1); j += 2)
      for (int k = 0; k < g.dim(2); k += 2) s += f[g.index(i, j, k)];
  return 8.0 * s * g.cell_volume();
}

}  // namespace

double weyl_tau(const ScalarField& v, double h, double tau) {
  if (!(h > 0.0)) throw std::invalid_argument("weyl: h must be positive");
  double s = 0.0;
  for (double x : v.values()) s += positive_power(x + tau, 1.5);
  return s * v.grid().cell_volume() / (3.0 * kPi * kPi * h * h * h);
}

ScalarField weyl1_local(const ScalarField& v, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("weyl: h must be positive");
  const double c = -2.0 / (15.0 * kPi * kPi * h * h * h);
  ScalarField out(v.grid());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = c * positive_power(v[i], 2.5);
  return out;
}

double weyl1(const ScalarField& v, double h) { return weyl1_local(v, h).integral(); }

CorrectionIntegrals correction_integrals(const ScalarField& v) {
  const ScalarField lap = laplacian(v);
  const VectorField grad = gradient(v);
  CorrectionIntegrals c;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double g2 = grad[0][i] * grad[0][i] + grad[1][i] * grad[1][i] +
                      grad[2][i] * grad[2][i];
    c.laplacian_term += positive_power(v[i], 1.5) * lap[i];
    c.gradient_term += positive_power(v[i], 0.5) * g2;
  }
  c.laplacian_term *= v.grid().cell_volume();
  c.gradient_term *= v.grid().cell_volume();
  return c;
}

CorrectedWeyl weyl_corrected(const ScalarField& v, double h, double kappa1,
                             double kappa2) {
  CorrectedWeyl out;
  out.weyl1 = weyl1(v, h);
  out.integrals = correction_integrals(v);
  out.kappa = kappa1 - 2.0 / 3.0 * kappa2;
  out.split_form = out.weyl1 + (kappa1 * out.integrals.laplacian_term +
                                kappa2 * out.integrals.gradient_term) / h;
  out.combined_form = out.weyl1 + out.kappa * out.integrals.laplacian_term / h;
  return out;
}

Eigen::Matrix2cd weyl_alpha_beta(double v_at_x, const Vec3& /*a_at_x*/, double h,
                                 const std::array<int, 3>& alpha,
                                 const std::array<int, 3>& beta, double tau) {
  int order = 0;
  for (int a = 0; a < 3; ++a) {
    if (alpha[a] < 0 || beta[a] < 0) throw std::invalid_argument("weyl: negative multi-index");
    order += alpha[a] + beta[a];
  }
  if (order > 2) throw std::invalid_argument("weyl: |alpha| + |beta| must not exceed 2");
  const double r2 = v_at_x + tau;
  Eigen::Matrix2cd out = Eigen::Matrix2cd::Zero();
  if (r2 <= 0.0 || order == 1) return out;
  const double r = std::sqrt(r2);
  // (eta . sigma)^2 = |eta|^2 I, so both surviving orders are scalar.
  const double ball = order == 0 ? 4.0 * kPi / 3.0 * r * r2 : 4.0 * kPi / 5.0 * r2 * r2 * r;
  out.diagonal().setConstant(ball / std::pow(2.0 * kPi * h, 3));
  return out;
}

WeylReport weyl_report(const ScalarField& v, double h, double tau, double kappa1,
                       double kappa2) {
  WeylReport r{h, tau, weyl_tau(v, h, tau), 0.0, weyl1_local(v, h), {}, kappa1, kappa2, 0.0};
  r.weyl1 = r.weyl1_local.integral();
  r.corrected = weyl_corrected(v, h, kappa1, kappa2);
  r.quadrature_error = std::abs(r.weyl1 - coarse_integral(r.weyl1_local));
  return r;
}

nlohmann::json to_json(const WeylReport& r) {
  return {{"h", r.h},
          {"tau", r.tau},
          {"weyl_tau", r.weyl_tau},
          {"weyl1", r.weyl1},
          {"weyl1_corrected", r.corrected.split_form},
          {"weyl1_corrected_combined", r.corrected.combined_form},
          {"kappa1", r.kappa1},
          {"kappa2", r.kappa2},
          {"kappa", r.corrected.kappa},
          {"laplacian_integral", r.corrected.integrals.laplacian_term},
          {"gradient_integral", r.corrected.integrals.gradient_term},
          {"quadrature_error", r.quadrature_error}};
}

}  // namespace paulilab
