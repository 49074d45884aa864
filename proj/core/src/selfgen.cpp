#include "paulilab/selfgen.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "paulilab/localize.hpp"
#include "paulilab/spectral_ops.hpp"
#include "paulilab/weyl.hpp"

namespace paulilab {

EnergyEvaluation evaluate_energy(const PauliOperator& op, double kappa,
                                 const EnergyOptions& options) {
  if (!(kappa > 0.0)) throw std::invalid_argument("energy: kappa must be positive");
  EnergyEvaluation e;
  e.uses_smoothing = options.smoothing.has_value();
  const double tau = e.uses_smoothing ? options.smoothing->L : 0.0;
  e.spectrum = negative_spectrum(op, tau, options.solver);
  if (!e.spectrum.complete) {
    throw std::runtime_error("energy: eigensolver failed (" + e.spectrum.message + ")");
  }
  e.trace = trace_minus(e.spectrum);
  if (e.uses_smoothing) e.smoothed = smoothed_trace(e.spectrum, *options.smoothing);
  e.trace_term = e.uses_smoothing ? e.smoothed : e.trace.value;
  const double h = op.h();
  e.field_energy = grad_energy(op.a());
  e.field_term = options.field_weight * e.field_energy / (kappa * h * h);
  e.energy = e.trace_term + e.field_term;
  return e;
}

double energy(const VectorField& a, const ScalarField& v, double h, double kappa,
              const EnergyOptions& options) {
  return evaluate_energy(PauliOperator(v.grid(), a, v, h), kappa, options).energy;
}

double energy_localized(const VectorField& a, const ScalarField& v, double h,
                        double kappa, const ScalarField& psi,
                        const SolverOptions& options) {
  if (!(kappa > 0.0)) throw std::invalid_argument("energy: kappa must be positive");
  const PauliOperator op(v.grid(), a, v, h);
  return localized_trace_minus(op, psi, options) + grad_energy(a) / (kappa * h * h);
}

VectorField current_phi(const SpectralResult& s, const PauliOperator& op,
                        const std::optional<SmoothingSpec>& smoothing) {
  const Grid& g = op.grid();
  const std::size_t n = g.size();
  VectorField phi(g);
  const Complex I(0, 1);
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double lam = s.eigenvalues[k];
    double w;
    if (smoothing) {
      if (lam > smoothing->L) continue;
      w = smoothing->weight(lam);
    } else {
      if (lam >= 0.0) continue;
      w = 1.0;
    }
    const SpinorField& u = s.eigenfunctions[k];
    const SpinorField qu = op.apply_q(u);
    const auto& x = u.values();
    const auto& y = qu.values();
    for (std::size_t site = 0; site < n; ++site) {
      const Complex u1 = x[site], u2 = x[site + n];
      const Complex q1 = std::conj(y[site]), q2 = std::conj(y[site + n]);
      // conj(Qu) . sigma_j u
      const Complex s1 = q1 * u2 + q2 * u1;
      const Complex s2 = q1 * (-I * u2) + q2 * (I * u1);
      const Complex s3 = q1 * u1 - q2 * u2;
      phi[0][site] -= 2.0 * w * s1.real();
      phi[1][site] -= 2.0 * w * s2.real();
      phi[2][site] -= 2.0 * w * s3.real();
    }
  }
  return phi;
}

double el_residual(const VectorField& a, const VectorField& phi, double kappa, double h,
                   double field_weight, double floor) {
  VectorField r = laplacian(a);
  r *= 2.0 * field_weight / (kappa * h * h);
  r -= phi;
  return r.l2_norm() / std::max(phi.l2_norm(), floor);
}

InequalityReport inequality_suite(const SpectralResult& s, const VectorField& a,
                                  const ScalarField& v, double h, double kappa) {
  InequalityReport r;
  r.trace = trace_minus(s).value;
  const double field = grad_energy(a);
  r.energy = r.trace + field / (kappa * h * h);
  r.weyl1 = weyl1(v, h);
  const double h3 = h * h * h;
  r.c_lower = std::max(0.0, -r.energy * h3);
  r.c_field = field / (kappa * h * h) * h3;

  double v52 = 0.0, v4 = 0.0;
  for (double x : v.values()) {
    if (x > 0.0) {
      v52 += std::pow(x, 2.5);
      v4 += std::pow(x, 4.0);
    }
  }
  v52 *= v.grid().cell_volume();
  v4 *= v.grid().cell_volume();
  const double scale = v52 / h3 + h * h * std::pow(field / (h * h), 0.75) *
                                      std::pow(v4 / std::pow(h, 8), 0.25);
  if (scale > 0.0) {
    r.c_lieb_thirring = std::max(0.0, -r.trace / scale);
  } else {
    r.lieb_thirring_ok = r.trace >= 0.0;
    r.c_lieb_thirring = r.lieb_thirring_ok ? 0.0 : std::numeric_limits<double>::infinity();
  }
  if (s.threshold >= 0.0 && !s.eigenfunctions.empty()) {
    r.c_density = diag_density(s, 0.0).max() * h3;
  }
  r.c_upper = (r.energy - r.weyl1) * h;
  r.lower_bound_ok = s.lower_bound_ok;
  r.ok = r.lower_bound_ok && r.lieb_thirring_ok && std::isfinite(r.c_lower) &&
         std::isfinite(r.c_field) && std::isfinite(r.c_density);
  return r;
}

nlohmann::json to_json(const InequalityReport& r) {
  return {{"energy", r.energy},
          {"trace", r.trace},
          {"weyl1", r.weyl1},
          {"c_lower", r.c_lower},
          {"c_field", r.c_field},
          {"c_lieb_thirring", r.c_lieb_thirring},
          {"c_density", r.c_density},
          {"c_upper", r.c_upper},
          {"lower_bound_ok", r.lower_bound_ok},
          {"lieb_thirring_ok", r.lieb_thirring_ok},
          {"ok", r.ok}};
}

Diagnostics diagnostics(const VectorField& a, double h, double kappa, double m_ref,
                        double theta) {
  const Grid& g = a.grid();
  const auto jac = jacobian(a);
  const std::size_t n = g.size();
  std::vector<double> frob(n, 0.0);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (std::size_t s = 0; s < n; ++s) frob[s] += jac[i][j][s] * jac[i][j][s];

  Diagnostics d;
  d.theta = theta;
  d.m = m_ref;
  for (double f : frob) d.mu = std::max(d.mu, std::sqrt(f));
  d.mu_bar = std::max(d.mu, 1.0);
  d.varsigma = kappa * m_ref * std::pow(h, 1.5);
  d.grad_norm = std::sqrt(grad_energy(a));

  const double expo = theta > 1.0 ? theta - 1.0 : theta;
  std::array<int, 3> reach;
  for (int ax = 0; ax < 3; ++ax) {
    reach[ax] = std::min(static_cast<int>(std::floor(1.0 / g.spacing(ax))), g.dim(ax) / 2);
  }
  for (std::size_t s = 0; s < n; ++s) {
    const auto p = g.unravel(s);
    for (int di = 0; di <= reach[0]; ++di)
      for (int dj = -reach[1]; dj <= reach[1]; ++dj)
        for (int dk = -reach[2]; dk <= reach[2]; ++dk) {
          // Each unordered pair once: lexicographically positive offsets.
          if (di == 0 && (dj < 0 || (dj == 0 && dk <= 0))) continue;
          const double dx = di * g.spacing(0), dy = dj * g.spacing(1), dz = dk * g.spacing(2);
          const double dist = std::sqrt(dx * dx + dy * dy + dz * dz);
          if (dist > 1.0) continue;
          const std::size_t t =
              g.index((p[0] + di) % g.dim(0), (p[1] + dj + g.dim(1)) % g.dim(1),
                      (p[2] + dk + g.dim(2)) % g.dim(2));
          double diff = 0.0;
          for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
              const double q = jac[i][j][s] - jac[i][j][t];
              diff += q * q;
            }
          d.holder = std::max(d.holder, std::sqrt(diff) / std::pow(dist, expo));
        }
  }
  return d;
}

nlohmann::json to_json(const Diagnostics& d) {
  return {{"mu", d.mu},         {"mu_bar", d.mu_bar}, {"M", d.m},
          {"varsigma", d.varsigma}, {"holder", d.holder}, {"theta", d.theta},
          {"grad_norm", d.grad_norm}};
}

}  // namespace paulilab
