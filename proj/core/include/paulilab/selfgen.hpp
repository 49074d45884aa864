#pragma once

#include <optional>

#include <nlohmann/json.hpp>

#include "paulilab/spectra.hpp"

namespace paulilab {

struct EnergyOptions {
  SolverOptions solver;
  /// When set, the trace term is the smoothed trace with this scale and the
  /// spectrum is computed up to L.
  std::optional<SmoothingSpec> smoothing;
  /// Weight rho + 1/K multiplying the field term (1 by default).
  double field_weight = 1.0;
};

struct EnergyEvaluation {
  SpectralResult spectrum;
  TraceReport trace;        // plain Tr^- (always reported)
  double smoothed = 0.0;    // smoothed trace, when smoothing is active
  bool uses_smoothing = false;
  double trace_term = 0.0;  // the trace value entering the energy
  double field_energy = 0.0;  // integral of |dA|^2
  double field_term = 0.0;    // field_weight (kappa h^2)^-1 field_energy
  double energy = 0.0;
};

/// Tr^- H_{A,V} (or its smoothed variant) plus the weighted field term.
EnergyEvaluation evaluate_energy(const PauliOperator& op, double kappa,
                                 const EnergyOptions& options = {});
double energy(const VectorField& a, const ScalarField& v, double h, double kappa,
              const EnergyOptions& options = {});

/// Tr^-(psi H psi) + (kappa h^2)^-1 integral |dA|^2.
double energy_localized(const VectorField& a, const ScalarField& v, double h,
                        double kappa, const ScalarField& psi,
                        const SolverOptions& options = {});

/// Current Phi_j = -sum_n w_n 2 Re <(Q u_n)(x), sigma_j u_n(x)>_{C^2}, the
/// spin trace of the symmetrized kernel formula. w_n = 1 for lambda_n < 0,
/// or f'(lambda_n) for a smoothed trace. With this sign the derivative of
/// Tr^- along dA is +<Phi, dA>.
VectorField current_phi(const SpectralResult& s, const PauliOperator& op,
                        const std::optional<SmoothingSpec>& smoothing = std::nullopt);

/// ||(2 w / kappa h^2) lap A - Phi|| / max(||Phi||, floor).
double el_residual(const VectorField& a, const VectorField& phi, double kappa, double h,
                   double field_weight = 1.0, double floor = 1e-8);

/// Implied constants of the a-priori bounds, each the smallest C for which the
/// bound holds on this instance.
struct InequalityReport {
  double energy = 0.0;
  double trace = 0.0;
  double weyl1 = 0.0;
  double c_lower = 0.0;         // E >= -C h^-3
  double c_field = 0.0;         // (kappa h^2)^-1 int |dA|^2 <= C h^-3
  double c_lieb_thirring = 0.0; // magnetic Lieb-Thirring form
  double c_density = 0.0;       // sup e(x,x,0) <= C h^-3
  double c_upper = 0.0;         // E <= Weyl1 + C h^-1
  bool lower_bound_ok = true;   // min eigenvalue >= -max V
  bool lieb_thirring_ok = true; // a finite C exists
  bool ok = true;
};

InequalityReport inequality_suite(const SpectralResult& s, const VectorField& a,
                                  const ScalarField& v, double h, double kappa);
nlohmann::json to_json(const InequalityReport& r);

struct Diagnostics {
  double mu = 0.0;       // sup |dA| (Frobenius norm of the Jacobian)
  double mu_bar = 1.0;   // max(mu, 1)
  double m = 0.0;        // reference M
  double varsigma = 0.0; // kappa M h^{3/2}
  double holder = 0.0;   // discrete Hoelder seminorm of dA
  double theta = 1.5;
  double grad_norm = 0.0;  // ||dA||_2
};

/// Hoelder seminorm: sup over site pairs at distance in (0, 1] of
/// |dA(x) - dA(y)| / |x - y|^(theta - 1) for theta > 1, exponent theta otherwise.
Diagnostics diagnostics(const VectorField& a, double h, double kappa, double m_ref,
                        double theta = 1.5);
nlohmann::json to_json(const Diagnostics& d);

}  // namespace paulilab
