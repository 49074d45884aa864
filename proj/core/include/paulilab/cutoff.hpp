#pragma once

#include "paulilab/fields.hpp"

namespace paulilab {

/// C-infinity step: 0 for t <= 0, 1 for t >= 1, built from exp(-1/t).
double smooth_step(double t);

/// Even C-infinity bump: 1 on [-1/2, 1/2], 0 outside (-1, 1), values in [0, 1].
double plateau_bump(double x);

/// Finite-difference check of |d^a psi| <= c psi ell^(-2|a|), |a| <= 2, at all
/// sites with psi > 1e-10, plus 0 <= psi <= 1 and |d ell| <= 1/2.
struct CutoffAudit {
  double c = 0.0;              // smallest admissible constant
  double max_ell_slope = 0.0;  // max |d ell| by forward differences
  double psi_min = 0.0;
  double psi_max = 0.0;
  std::size_t sites_checked = 0;
  bool ok = false;
};

CutoffAudit audit_cutoff(const ScalarField& psi, const ScalarField& ell);

struct CutoffSpec {
  Vec3 requested_center{};
  Vec3 center{};  // nearest grid site
  bool snapped = false;
  double radius = 0.0;
  double taper = 0.0;
  ScalarField ell;
  ScalarField psi;
  CutoffAudit audit;
  double c() const { return audit.c; }
};

/// Radial cutoff: psi = 1 for r <= (1 - taper) radius, smooth decay to 0 at
/// r = radius. ell = max(|radius - r| / 4, max grid spacing). The support plus
/// one spacing must fit inside the box, otherwise std::invalid_argument.
CutoffSpec make_cutoff(const Grid& grid, const Vec3& center, double radius,
                       double taper);

}  // namespace paulilab
