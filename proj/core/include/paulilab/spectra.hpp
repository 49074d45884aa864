#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "paulilab/eigensolver.hpp"
#include "paulilab/pauli.hpp"

namespace paulilab {

enum class SolverKind { Auto, Dense, Iterative };

std::string to_string(SolverKind kind);
SolverKind solver_kind_from_string(const std::string& s);

struct SolverOptions {
  SolverKind kind = SolverKind::Auto;
  /// Auto picks the dense solver up to this many sites.
  std::size_t dense_max_sites = 216;
  KrylovOptions krylov;
  /// Eigenvalues within this distance of 0 are threshold-ambiguous.
  double ambiguity = 1e-6;
  /// Compare the eigenvalue count with a dense run on grids of at most 6^3.
  bool cross_check = true;
};

/// Eigenpairs of an operator at or below a threshold.
struct SpectralResult {
  double h = 0.0;
  double threshold = 0.0;
  std::vector<double> eigenvalues;  // ascending, <= threshold
  std::vector<SpinorField> eigenfunctions;  // orthonormal in the weighted norm
  std::vector<double> residuals;    // ||H u - lambda u|| in the weighted norm
  /// Eigenvalues in (threshold, threshold + ambiguity] without vectors, so
  /// that trace functionals can report the inclusive value.
  std::vector<double> just_above;
  SolverKind solver = SolverKind::Dense;
  bool complete = false;
  bool cluster_at_threshold = false;
  double lower_bound = 0.0;  // -max V for Pauli operators
  bool lower_bound_ok = true;
  double ambiguity = 1e-6;
  int applies = 0;
  std::string message;

  std::size_t size() const { return eigenvalues.size(); }
};

/// Negative spectrum of the Pauli operator: every eigenvalue <= tau.
SpectralResult negative_spectrum(const PauliOperator& op, double tau,
                                 const SolverOptions& options = {});

/// Packages eigenpairs whose columns are Euclidean-normalized spinor vectors
/// of `grid`; pairs above tau are kept as `just_above` values only.
SpectralResult to_spectral_result(const EigenPairs& pairs, const Grid& grid, double h,
                                  double tau, double lower_bound, SolverKind kind,
                                  double ambiguity);

/// Same for a general Hermitian operator on spinors of `grid`; `shift` must
/// exceed the bottom of the spectrum (used for the Krylov iteration) and
/// `lower_bound` is the a-priori bound checked against the result.
SpectralResult spectrum_below(const LinearOperator& op, const Grid& grid, double h,
                              double tau, double shift, double lower_bound,
                              const SolverOptions& options = {});

struct TraceReport {
  double value = 0.0;      // sum of eigenvalues < 0
  double including = 0.0;  // sum over eigenvalues <= +ambiguity
  double excluding = 0.0;  // sum over eigenvalues < -ambiguity
  int count = 0;           // eigenvalues < 0
  int ambiguous = 0;       // eigenvalues with |lambda| <= ambiguity
};

/// Sum of negative eigenvalues. Throws std::runtime_error for incomplete
/// spectra or spectra computed below a threshold < 0.
TraceReport trace_minus(const SpectralResult& s);

/// Integral of sum_{lambda_n < 0} lambda_n |u_n(x)|^2 psi2(x).
double density_e1(const SpectralResult& s, const ScalarField& psi2);

/// Spin-traced sum_{lambda_n <= tau} |u_n(x)|^2.
ScalarField diag_density(const SpectralResult& s, double tau);

/// Smoothed trace with scale L and the plateau bump phibar.
struct SmoothingSpec {
  double L = 0.0;
  static double phibar(double x);
  static double phibar_derivative(double x);
  /// Per-eigenvalue contribution f(lambda).
  double contribution(double lambda) const;
  /// f'(lambda), the weight of each eigenfunction in the current.
  double weight(double lambda) const;
};

/// sum_n phibar(l_n/L)(l_n - L) + (1 - phibar(l_n/L)) l_n [l_n < 0]. Needs a
/// spectrum complete up to L.
double smoothed_trace(const SpectralResult& s, const SmoothingSpec& spec);

nlohmann::json spectral_metadata(const SpectralResult& s);
/// Writes <stem>.json and <stem>.bin (eigenfunctions, fields format).
void save_spectral(const SpectralResult& s, const std::filesystem::path& stem);
SpectralResult load_spectral(const std::filesystem::path& stem);

}  // namespace paulilab
