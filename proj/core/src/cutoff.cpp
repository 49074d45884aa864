#include "paulilab/cutoff.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace paulilab {

namespace {

double exp_window(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

}  // namespace

double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = exp_window(t);
  return a / (a + exp_window(1.0 - t));
}

double plateau_bump(double x) { return 1.0 - smooth_step(2.0 * std::abs(x) - 1.0); }

CutoffAudit audit_cutoff(const ScalarField& psi, const ScalarField& ell) {
  require_same_grid(psi.grid(), ell.grid(), "cutoff audit");
  const Grid& g = psi.grid();
  const auto& n = g.dims();
  const Vec3 d = g.spacings();
  CutoffAudit out;
  out.psi_min = psi.min();
  out.psi_max = psi.max();

  auto at = [&](const ScalarField& f, std::array<int, 3> idx) {
    for (int a = 0; a < 3; ++a) idx[a] = (idx[a] % n[a] + n[a]) % n[a];
    return f[g.index(idx[0], idx[1], idx[2])];
  };

  for (std::size_t s = 0; s < g.size(); ++s) {
    const auto idx = g.unravel(s);
    for (int a = 0; a < 3; ++a) {
      auto fwd = idx;
      ++fwd[a];
      out.max_ell_slope =
          std::max(out.max_ell_slope, std::abs(at(ell, fwd) - ell[s]) / d[a]);
    }
    const double p = psi[s];
    if (!(p > 1e-10)) continue;
    ++out.sites_checked;
    const double l2 = ell[s] * ell[s];
    double c = 1.0;  // |a| = 0
    for (int a = 0; a < 3; ++a) {
      auto up = idx, dn = idx;
      ++up[a];
      --dn[a];
      const double first = (at(psi, up) - at(psi, dn)) / (2 * d[a]);
      c = std::max(c, std::abs(first) * l2 / p);
      for (int b = a; b < 3; ++b) {
        double second;
        if (a == b) {
          second = (at(psi, up) - 2 * p + at(psi, dn)) / (d[a] * d[a]);
        } else {
          auto pp = idx, pm = idx, mp = idx, mm = idx;
          ++pp[a], ++pp[b];
          ++pm[a], --pm[b];
          --mp[a], ++mp[b];
          --mm[a], --mm[b];
          second = (at(psi, pp) - at(psi, pm) - at(psi, mp) + at(psi, mm)) /
                   (4 * d[a] * d[b]);
        }
        c = std::max(c, std::abs(second) * l2 * l2 / p);
      }
    }
    out.c = std::max(out.c, c);
  }
  out.ok = std::isfinite(out.c) && out.psi_min >= 0.0 && out.psi_max <= 1.0 &&
           out.max_ell_slope <= 0.5 && ell.min() >= 0.0;
  return out;
}

CutoffSpec make_cutoff(const Grid& grid, const Vec3& center, double radius,
                       double taper) {
  if (!(radius >= 0.0)) throw std::invalid_argument("cutoff: negative radius");
  if (!(taper > 0.0 && taper <= 1.0)) {
    throw std::invalid_argument("cutoff: taper must lie in (0, 1]");
  }
  CutoffSpec spec{center, center, false, radius, taper,
                  ScalarField(grid), ScalarField(grid), {}};
  for (int a = 0; a < 3; ++a) {
    const double d = grid.spacing(a);
    const double half = grid.length(a) / 2;
    int i = static_cast<int>(std::lround(center[a] / d)) + grid.dim(a) / 2;
    i = std::clamp(i, 0, grid.dim(a) - 1);
    spec.center[a] = grid.coordinate(a, i);
    if (std::abs(spec.center[a] - center[a]) > 1e-12 * grid.length(a)) spec.snapped = true;
    if (radius > 0.0 && std::abs(spec.center[a]) + radius > half - d + 1e-12 * half) {
      throw std::invalid_argument("cutoff: support exceeds the box");
    }
  }

  const double inner = (1.0 - taper) * radius;
  const double floor = grid.max_spacing();
  for (std::size_t s = 0; s < grid.size(); ++s) {
    const Vec3 x = grid.position(s);
    double r2 = 0.0;
    for (int a = 0; a < 3; ++a) r2 += (x[a] - spec.center[a]) * (x[a] - spec.center[a]);
    const double r = std::sqrt(r2);
    spec.ell[s] = std::max(0.25 * std::abs(radius - r), floor);
    if (r >= radius) continue;
    spec.psi[s] = r <= inner ? 1.0 : 1.0 - smooth_step((r - inner) / (radius - inner));
  }
  spec.audit = audit_cutoff(spec.psi, spec.ell);
  return spec;
}

}  // namespace paulilab
