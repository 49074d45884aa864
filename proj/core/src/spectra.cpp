#include "paulilab/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "paulilab/cutoff.hpp"
#include "paulilab/field_io.hpp"

namespace paulilab {

std::string to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::Dense: return "dense";
    case SolverKind::Iterative: return "iterative";
    default: return "auto";
  }
}

SolverKind solver_kind_from_string(const std::string& s) {
  if (s == "dense") return SolverKind::Dense;
  if (s == "iterative") return SolverKind::Iterative;
  if (s == "auto") return SolverKind::Auto;
  throw std::invalid_argument("unknown solver '" + s + "' (auto, dense, iterative)");
}

namespace {

void fix_phase(Eigen::Ref<Eigen::VectorXcd> v) {
  const double big = v.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > 1e-6 * big) {
      v *= std::conj(v[i]) / std::abs(v[i]);
      return;
    }
  }
}

}  // namespace

SpectralResult to_spectral_result(const EigenPairs& pairs, const Grid& grid, double h,
                                  double tau, double lower_bound, SolverKind kind,
                                  double ambiguity) {
  const double amb = ambiguity;
  SpectralResult s;
  s.h = h;
  s.threshold = tau;
  s.solver = kind;
  s.ambiguity = amb;
  s.lower_bound = lower_bound;
  s.applies = pairs.applies;
  s.complete = pairs.converged;
  s.message = pairs.message;
  const double scale = 1.0 / std::sqrt(grid.cell_volume());
  for (Eigen::Index i = 0; i < pairs.values.size(); ++i) {
    const double lam = pairs.values[i];
    if (lam > tau) {
      s.just_above.push_back(lam);
      continue;
    }
    Eigen::VectorXcd v = pairs.vectors.col(i) * scale;
    fix_phase(v);
    s.eigenvalues.push_back(lam);
    s.eigenfunctions.emplace_back(grid, std::move(v));
    s.residuals.push_back(pairs.residuals[i]);
    if (pairs.residuals[i] > 1e-8 * std::max(1.0, std::abs(lam))) {
      s.complete = false;
      s.message = "residual above tolerance for eigenvalue " + std::to_string(lam);
    }
  }
  for (double lam : pairs.values) {
    if (std::abs(lam - tau) <= amb) s.cluster_at_threshold = true;
  }
  if (!s.eigenvalues.empty()) {
    s.lower_bound_ok = s.eigenvalues.front() >=
                       lower_bound - 1e-9 * std::max(1.0, std::abs(lower_bound));
  }
  return s;
}

SpectralResult spectrum_below(const LinearOperator& op, const Grid& grid, double h,
                              double tau, double shift, double lower_bound,
                              const SolverOptions& options) {
  if (op.dim() != 2 * static_cast<Eigen::Index>(grid.size())) {
    throw std::invalid_argument("spectrum: operator does not act on spinors of the grid");
  }
  SolverKind kind = options.kind;
  if (kind == SolverKind::Auto) {
    kind = grid.size() <= options.dense_max_sites ? SolverKind::Dense : SolverKind::Iterative;
  }
  const double amb = options.ambiguity;
  const double cut = tau + amb;
  EigenPairs pairs = kind == SolverKind::Dense
                         ? dense_eigenpairs(op, cut)
                         : krylov_eigenpairs(op, cut, shift, options.krylov);

  SpectralResult s = to_spectral_result(pairs, grid, h, tau, lower_bound, kind, amb);
  if (kind == SolverKind::Iterative && options.cross_check && grid.size() <= 216) {
    const EigenPairs dense = dense_eigenpairs(op, cut);
    if (dense.values.size() != pairs.values.size()) {
      s.complete = false;
      s.message = "iterative count " + std::to_string(pairs.values.size()) +
                  " differs from dense count " + std::to_string(dense.values.size());
    }
  }
  return s;
}

SpectralResult negative_spectrum(const PauliOperator& op, double tau,
                                 const SolverOptions& options) {
  const double vmax = op.v().max();
  return spectrum_below(op, op.grid(), op.h(), tau, std::max(vmax, 0.0) + 1.0, -vmax,
                        options);
}

TraceReport trace_minus(const SpectralResult& s) {
  if (!s.complete) {
    throw std::runtime_error("trace: spectrum flagged incomplete (" + s.message + ")");
  }
  if (s.threshold < -s.ambiguity) {
    throw std::runtime_error("trace: spectrum not computed up to 0");
  }
  TraceReport r;
  for (double lam : s.eigenvalues) {
    if (lam < 0.0) {
      r.value += lam;
      ++r.count;
    }
    if (lam <= s.ambiguity) r.including += lam;
    if (lam < -s.ambiguity) r.excluding += lam;
    if (std::abs(lam) <= s.ambiguity) ++r.ambiguous;
  }
  for (double lam : s.just_above) {
    if (lam <= s.ambiguity) {
      r.including += lam;
      if (std::abs(lam) <= s.ambiguity) ++r.ambiguous;
    }
  }
  return r;
}

double density_e1(const SpectralResult& s, const ScalarField& psi2) {
  double total = 0.0;
  for (std::size_t n = 0; n < s.size(); ++n) {
    if (s.eigenvalues[n] >= 0.0) continue;
    const SpinorField& u = s.eigenfunctions[n];
    require_same_grid(u.grid(), psi2.grid(), "density_e1");
    const std::size_t sites = psi2.size();
    double acc = 0.0;
    for (std::size_t x = 0; x < sites; ++x) {
      acc += (std::norm(u.values()[x]) + std::norm(u.values()[x + sites])) * psi2[x];
    }
    total += s.eigenvalues[n] * acc;
  }
  return total * psi2.grid().cell_volume();
}

ScalarField diag_density(const SpectralResult& s, double tau) {
  if (tau > s.threshold) {
    throw std::invalid_argument("diag_density: spectrum not computed up to tau");
  }
  if (s.eigenfunctions.empty()) {
    throw std::invalid_argument("diag_density: spectrum has no grid (no eigenfunctions)");
  }
  const Grid& g = s.eigenfunctions.front().grid();
  ScalarField out(g);
  const std::size_t sites = g.size();
  for (std::size_t n = 0; n < s.size(); ++n) {
    if (s.eigenvalues[n] > tau) continue;
    const auto& v = s.eigenfunctions[n].values();
    for (std::size_t x = 0; x < sites; ++x) {
      out[x] += std::norm(v[x]) + std::norm(v[x + sites]);
    }
  }
  return out;
}

double SmoothingSpec::phibar(double x) { return plateau_bump(x); }

double SmoothingSpec::phibar_derivative(double x) {
  const double t = 2.0 * std::abs(x) - 1.0;
  if (t <= 0.0 || t >= 1.0) return 0.0;
  const double a = std::exp(-1.0 / t), b = std::exp(-1.0 / (1.0 - t));
  const double da = a / (t * t), db = -b / ((1.0 - t) * (1.0 - t));
  const double ds = (da * (a + b) - a * (da + db)) / ((a + b) * (a + b));
  return -2.0 * ds * (x < 0 ? -1.0 : 1.0);
}

double SmoothingSpec::contribution(double lambda) const {
  const double p = phibar(lambda / L);
  return p * (lambda - L) + (lambda < 0.0 ? (1.0 - p) * lambda : 0.0);
}

double SmoothingSpec::weight(double lambda) const {
  const double dp = phibar_derivative(lambda / L);
  if (lambda < 0.0) return 1.0 - dp;
  return dp * (lambda - L) / L + phibar(lambda / L);
}

double smoothed_trace(const SpectralResult& s, const SmoothingSpec& spec) {
  if (!(spec.L > 0.0)) throw std::invalid_argument("smoothed trace: L must be positive");
  if (!s.complete) throw std::runtime_error("smoothed trace: spectrum flagged incomplete");
  if (s.threshold < spec.L) {
    throw std::runtime_error("smoothed trace: spectrum must be complete up to L");
  }
  double total = 0.0;
  for (double lam : s.eigenvalues) total += spec.contribution(lam);
  return total;
}

nlohmann::json spectral_metadata(const SpectralResult& s) {
  nlohmann::json j;
  j["h"] = s.h;
  j["threshold"] = s.threshold;
  j["eigenvalues"] = s.eigenvalues;
  j["residuals"] = s.residuals;
  j["just_above"] = s.just_above;
  j["solver"] = to_string(s.solver);
  j["complete"] = s.complete;
  j["cluster_at_threshold"] = s.cluster_at_threshold;
  j["lower_bound"] = s.lower_bound;
  j["lower_bound_ok"] = s.lower_bound_ok;
  j["ambiguity"] = s.ambiguity;
  j["applies"] = s.applies;
  j["message"] = s.message;
  return j;
}

void save_spectral(const SpectralResult& s, const std::filesystem::path& stem) {
  std::filesystem::path meta = stem, blob = stem;
  meta += ".json";
  blob += ".bin";
  nlohmann::json j = spectral_metadata(s);
  if (!s.eigenfunctions.empty()) {
    const Grid& g = s.eigenfunctions.front().grid();
    j["dims"] = g.dims();
    j["box"] = g.box();
    write_blob(blob, to_blob(s.eigenfunctions, g));
  }
  std::ofstream os(meta);
  if (!os) throw std::runtime_error("cannot write " + meta.string());
  os << j.dump(2) << '\n';
}

SpectralResult load_spectral(const std::filesystem::path& stem) {
  std::filesystem::path meta = stem, blob = stem;
  meta += ".json";
  blob += ".bin";
  std::ifstream is(meta);
  if (!is) throw std::runtime_error("cannot read " + meta.string());
  const nlohmann::json j = nlohmann::json::parse(is);
  SpectralResult s;
  s.h = j.at("h");
  s.threshold = j.at("threshold");
  s.eigenvalues = j.at("eigenvalues").get<std::vector<double>>();
  s.residuals = j.at("residuals").get<std::vector<double>>();
  s.just_above = j.at("just_above").get<std::vector<double>>();
  s.solver = solver_kind_from_string(j.at("solver"));
  s.complete = j.at("complete");
  s.cluster_at_threshold = j.at("cluster_at_threshold");
  s.lower_bound = j.at("lower_bound");
  s.lower_bound_ok = j.at("lower_bound_ok");
  s.ambiguity = j.at("ambiguity");
  s.applies = j.at("applies");
  s.message = j.at("message");
  if (!s.eigenvalues.empty()) s.eigenfunctions = spinors_from_blob(read_blob(blob));
  if (s.eigenfunctions.size() != s.eigenvalues.size()) {
    throw std::runtime_error("spectral blob does not match metadata in " + meta.string());
  }
  return s;
}

}  // namespace paulilab
