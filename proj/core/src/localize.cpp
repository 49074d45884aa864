#include "paulilab/localize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace paulilab {

LocalizedOperator::LocalizedOperator(const LinearOperator& op, const ScalarField& psi)
    : op_(op), weight_(2 * psi.size()) {
  if (op.dim() != weight_.size()) {
    throw std::invalid_argument("localized operator: cutoff does not match operator");
  }
  const std::size_t n = psi.size();
  for (std::size_t s = 0; s < n; ++s) weight_[s] = weight_[s + n] = psi[s];
}

void LocalizedOperator::apply(const Eigen::MatrixXcd& x, Eigen::MatrixXcd& y) const {
  const Eigen::MatrixXcd px = weight_.asDiagonal() * x;
  op_.apply(px, y);
  y = weight_.asDiagonal() * y;
}

namespace {

// psi H psi compressed to the sites where psi != 0; the rest of its spectrum
// is an exact kernel.
class SupportOperator : public LinearOperator {
 public:
  SupportOperator(const LinearOperator& op, const ScalarField& psi) : op_(op), n_(psi.size()) {
    for (std::size_t s = 0; s < n_; ++s) {
      if (psi[s] != 0.0) sites_.push_back(s);
    }
    weight_.resize(sites_.size());
    for (std::size_t i = 0; i < sites_.size(); ++i) weight_[i] = psi[sites_[i]];
  }
  Eigen::Index dim() const override { return 2 * static_cast<Eigen::Index>(sites_.size()); }
  std::size_t sites() const { return sites_.size(); }

  Eigen::MatrixXcd lift(const Eigen::MatrixXcd& x, bool weighted) const {
    const std::size_t m = sites_.size();
    Eigen::MatrixXcd full = Eigen::MatrixXcd::Zero(2 * n_, x.cols());
    for (std::size_t i = 0; i < m; ++i) {
      const double w = weighted ? weight_[i] : 1.0;
      full.row(sites_[i]) = w * x.row(i);
      full.row(sites_[i] + n_) = w * x.row(i + m);
    }
    return full;
  }

  void apply(const Eigen::MatrixXcd& x, Eigen::MatrixXcd& y) const override {
    const std::size_t m = sites_.size();
    Eigen::MatrixXcd hx;
    op_.apply(lift(x, true), hx);
    y.resize(dim(), x.cols());
    for (std::size_t i = 0; i < m; ++i) {
      y.row(i) = weight_[i] * hx.row(sites_[i]);
      y.row(i + m) = weight_[i] * hx.row(sites_[i] + n_);
    }
  }

 private:
  const LinearOperator& op_;
  std::size_t n_;
  std::vector<std::size_t> sites_;
  Eigen::VectorXd weight_;
};

}  // namespace

SpectralResult localized_spectrum(const PauliOperator& op, const ScalarField& psi,
                                  const SolverOptions& options) {
  require_same_grid(op.grid(), psi.grid(), "localized spectrum");
  const SupportOperator loc(op, psi);
  double top = 0.0;
  for (std::size_t s = 0; s < psi.size(); ++s) top = std::max(top, psi[s] * psi[s] * op.v()[s]);
  SolverKind kind = options.kind;
  if (kind == SolverKind::Auto) {
    kind = loc.sites() <= kLocalizedDenseSites ? SolverKind::Dense : SolverKind::Iterative;
  }
  const double tau = kind == SolverKind::Dense ? 0.0 : -options.ambiguity;
  const double cut = tau + options.ambiguity;
  EigenPairs pairs;
  if (loc.sites() > 0) {
    pairs = kind == SolverKind::Dense ? dense_eigenpairs(loc, cut)
                                      : krylov_eigenpairs(loc, cut, top + 1.0, options.krylov);
  }
  pairs.vectors = loc.lift(pairs.vectors, false);
  return to_spectral_result(pairs, op.grid(), op.h(), tau, -top, kind, options.ambiguity);
}

double localized_trace_minus(const PauliOperator& op, const ScalarField& psi,
                             const SolverOptions& options) {
  return trace_minus(localized_spectrum(op, psi, options)).value;
}

Partition build_partition(const Grid& grid, double gamma) {
  if (!(gamma >= 4.0 * grid.max_spacing() * (1.0 - 1e-12))) {
    throw std::invalid_argument("partition: gamma must be at least 4 grid spacings");
  }
  std::array<int, 3> m;
  Vec3 step;
  for (int a = 0; a < 3; ++a) {
    m[a] = std::max(1, static_cast<int>(std::ceil(grid.length(a) / gamma - 1e-9)));
    step[a] = grid.length(a) / m[a];
  }
  const std::size_t n = grid.size();
  // Per-axis bump values for each lattice index.
  std::array<std::vector<std::vector<double>>, 3> bump;
  for (int a = 0; a < 3; ++a) {
    bump[a].assign(m[a], std::vector<double>(grid.dim(a), 1.0));
    if (m[a] == 1) continue;
    for (int c = 0; c < m[a]; ++c) {
      const double centre = -grid.length(a) / 2 + c * step[a];
      for (int i = 0; i < grid.dim(a); ++i) {
        const double d = grid.periodic_delta(a, grid.coordinate(a, i), centre);
        bump[a][c][i] = plateau_bump(d / step[a]);
      }
    }
  }

  Partition p;
  p.gamma = gamma;
  ScalarField total(grid);
  for (int c0 = 0; c0 < m[0]; ++c0)
    for (int c1 = 0; c1 < m[1]; ++c1)
      for (int c2 = 0; c2 < m[2]; ++c2) {
        ScalarField f(grid);
        for (std::size_t s = 0; s < n; ++s) {
          const auto idx = grid.unravel(s);
          f[s] = bump[0][c0][idx[0]] * bump[1][c1][idx[1]] * bump[2][c2][idx[2]];
          total[s] += f[s] * f[s];
        }
        p.members.push_back(std::move(f));
      }
  for (auto& f : p.members)
    for (std::size_t s = 0; s < n; ++s) f[s] /= std::sqrt(total[s]);

  std::size_t member = 0;
  for (int c0 = 0; c0 < m[0]; ++c0)
    for (int c1 = 0; c1 < m[1]; ++c1)
      for (int c2 = 0; c2 < m[2]; ++c2, ++member) {
        const int cs[3] = {c0, c1, c2};
        ScalarField ell(grid);
        for (std::size_t s = 0; s < n; ++s) {
          const auto idx = grid.unravel(s);
          double dist = std::numeric_limits<double>::infinity();
          for (int a = 0; a < 3; ++a) {
            if (m[a] == 1) continue;
            const double centre = -grid.length(a) / 2 + cs[a] * step[a];
            const double d = std::abs(grid.periodic_delta(a, grid.coordinate(a, idx[a]), centre));
            dist = std::min(dist, std::max(step[a] - d, 0.0));
          }
          if (!std::isfinite(dist)) dist = std::min({grid.length(0), grid.length(1), grid.length(2)});
          ell[s] = std::max(0.25 * dist, grid.max_spacing());
        }
        p.audits.push_back(audit_cutoff(p.members[member], ell));
      }

  for (std::size_t s = 0; s < n; ++s) {
    double sum = 0.0;
    for (const auto& f : p.members) sum += f[s] * f[s];
    p.completeness_defect = std::max(p.completeness_defect, std::abs(sum - 1.0));
  }
  for (const auto& f : p.members) {
    for (std::size_t s = 0; s < n; ++s) {
      const auto idx = grid.unravel(s);
      double g2 = 0.0;
      for (int a = 0; a < 3; ++a) {
        auto up = idx, dn = idx;
        up[a] = (up[a] + 1) % grid.dim(a);
        dn[a] = (dn[a] + grid.dim(a) - 1) % grid.dim(a);
        const double d = (f[grid.index(up[0], up[1], up[2])] -
                          f[grid.index(dn[0], dn[1], dn[2])]) / (2 * grid.spacing(a));
        g2 += d * d;
      }
      p.gradient_constant = std::max(p.gradient_constant, std::sqrt(g2) * gamma);
    }
  }
  return p;
}

double ism_defect(const LinearOperator& op, const std::vector<ScalarField>& members,
                  const std::vector<SpinorField>& trials) {
  double worst = 0.0;
  for (const SpinorField& u : trials) {
    const std::size_t n = u.grid().size();
    auto mult = [n](const ScalarField& f, const Eigen::VectorXcd& v) {
      Eigen::VectorXcd out(v.size());
      for (std::size_t s = 0; s < n; ++s) {
        out[s] = f[s] * v[s];
        out[s + n] = f[s] * v[s + n];
      }
      return out;
    };
    auto apply = [&op](const Eigen::VectorXcd& v) {
      Eigen::MatrixXcd y;
      op.apply(v, y);
      return Eigen::VectorXcd(y.col(0));
    };
    const Eigen::VectorXcd hu = apply(u.values());
    Eigen::VectorXcd sum = Eigen::VectorXcd::Zero(hu.size());
    for (const ScalarField& psi : members) {
      const Eigen::VectorXcd psi_u = mult(psi, u.values());
      const Eigen::VectorXcd h_psi_u = apply(psi_u);
      const Eigen::VectorXcd h_psi2_u = apply(mult(psi, psi_u));
      // [H, psi] v = H(psi v) - psi H v
      const Eigen::VectorXcd comm_psi_u = h_psi2_u - mult(psi, h_psi_u);
      const Eigen::VectorXcd comm_u = h_psi_u - mult(psi, hu);
      sum += mult(psi, h_psi_u) + 0.5 * (comm_psi_u - mult(psi, comm_u));
    }
    const double denom = hu.norm();
    const double defect = (hu - sum).norm();
    worst = std::max(worst, denom > 0.0 ? defect / denom : defect);
  }
  return worst;
}

double ism_check(const LinearOperator& op, const Partition& partition, int trials,
                 std::uint64_t seed) {
  if (partition.members.empty()) throw std::invalid_argument("ism: empty partition");
  const Grid& g = partition.members.front().grid();
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd;
  std::vector<SpinorField> us;
  for (int t = 0; t < trials; ++t) {
    Eigen::VectorXcd v(2 * g.size());
    for (auto& c : v) c = Complex(nd(gen), nd(gen));
    us.emplace_back(g, std::move(v));
  }
  return ism_defect(op, partition.members, us);
}

namespace {

double dense_trace(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (m + m.adjoint()),
                                                      Eigen::EigenvaluesOnly);
  double t = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()[i] < 0.0) t += es.eigenvalues()[i];
  return t;
}

}  // namespace

SubadditivityReport subadditivity_check(const PauliOperator& op, const Partition& partition,
                                        double tolerance) {
  const Eigen::MatrixXcd h = dense_matrix(op);
  const std::size_t n = op.grid().size();
  Eigen::MatrixXcd whole = Eigen::MatrixXcd::Zero(h.rows(), h.cols());
  SubadditivityReport r;
  for (const ScalarField& psi : partition.members) {
    Eigen::VectorXd w(2 * n);
    for (std::size_t s = 0; s < n; ++s) w[s] = w[s + n] = psi[s];
    const Eigen::MatrixXcd part = w.asDiagonal() * h * w.asDiagonal();
    r.parts += dense_trace(part);
    whole += part;
  }
  r.whole = dense_trace(whole);
  r.gap = r.whole - r.parts;
  r.holds = r.gap >= -tolerance * std::max(1.0, std::abs(r.parts));
  return r;
}

nlohmann::json to_json(const SubadditivityReport& r) {
  return {{"whole", r.whole}, {"parts", r.parts}, {"gap", r.gap}, {"holds", r.holds}};
}

}  // namespace paulilab
