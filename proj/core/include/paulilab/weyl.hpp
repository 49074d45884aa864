#pragma once

#include <Eigen/Core>
#include <array>
#include <nlohmann/json.hpp>

#include "paulilab/fields.hpp"

namespace paulilab {

/// (1 / 3 pi^2) h^-3 integral of (V + tau)_+^{3/2}: the phase-space volume
/// of {|xi|^2 - V <= tau} with the spin factor 2.
double weyl_tau(const ScalarField& v, double h, double tau);

/// Pointwise density of the energy term, -(2 / 15 pi^2) h^-3 V_+^{5/2}.
/// Equals the integral of tau d weyl_tau(tau) over tau <= 0, hence <= 0.
ScalarField weyl1_local(const ScalarField& v, double h);
double weyl1(const ScalarField& v, double h);

/// Correction integrals: I1 = int V_+^{3/2} lap V, I2 = int V_+^{1/2} |grad V|^2.
struct CorrectionIntegrals {
  double laplacian_term = 0.0;
  double gradient_term = 0.0;
};
CorrectionIntegrals correction_integrals(const ScalarField& v);

struct CorrectedWeyl {
  double weyl1 = 0.0;
  double split_form = 0.0;     // weyl1 + h^-1 (k1 I1 + k2 I2)
  double combined_form = 0.0;  // weyl1 + k h^-1 I1, k = k1 - 2/3 k2
  double kappa = 0.0;
  CorrectionIntegrals integrals;
};
CorrectedWeyl weyl_corrected(const ScalarField& v, double h, double kappa1,
                             double kappa2);

/// (2 pi h)^-3 times the integral over the ball |eta|^2 <= V + tau of
/// (eta . sigma)^order, order = |alpha| + |beta| <= 2. The shift by A(x)
/// drops out of the integral; the argument is kept for call-site clarity.
Eigen::Matrix2cd weyl_alpha_beta(double v_at_x, const Vec3& a_at_x, double h,
                                 const std::array<int, 3>& alpha,
                                 const std::array<int, 3>& beta, double tau);

struct WeylReport {
  double h = 0.0;
  double tau = 0.0;
  double weyl_tau = 0.0;
  double weyl1 = 0.0;
  ScalarField weyl1_local;
  CorrectedWeyl corrected;
  double kappa1 = 0.0;
  double kappa2 = 0.0;
  /// |full-grid minus every-other-site quadrature| of weyl1 (0 for odd dims).
  double quadrature_error = 0.0;
};

WeylReport weyl_report(const ScalarField& v, double h, double tau = 0.0,
                       double kappa1 = 0.0, double kappa2 = 0.0);
nlohmann::json to_json(const WeylReport& r);

}  // namespace paulilab
