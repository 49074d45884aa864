#pragma once

#include <vector>

#include <nlohmann/json.hpp>

#include "paulilab/cutoff.hpp"
#include "paulilab/spectra.hpp"

namespace paulilab {

/// u -> psi H (psi u); Hermitian whenever H is.
class LocalizedOperator : public LinearOperator {
 public:
  LocalizedOperator(const LinearOperator& op, const ScalarField& psi);
  Eigen::Index dim() const override { return op_.dim(); }
  void apply(const Eigen::MatrixXcd& x, Eigen::MatrixXcd& y) const override;

 private:
  const LinearOperator& op_;
  Eigen::VectorXd weight_;  // psi repeated for both spin components
};

/// Support size (sites with psi != 0) up to which Auto diagonalizes densely.
inline constexpr std::size_t kLocalizedDenseSites = 2048;

/// Negative spectrum of psi H psi, computed on the support of psi. The
/// iterative path resolves eigenvalues below -ambiguity only, since the
/// tapered edge of psi puts a continuum of eigenvalues next to 0.
SpectralResult localized_spectrum(const PauliOperator& op, const ScalarField& psi,
                                  const SolverOptions& options = {});
double localized_trace_minus(const PauliOperator& op, const ScalarField& psi,
                             const SolverOptions& options = {});

struct Partition {
  std::vector<ScalarField> members;
  std::vector<CutoffAudit> audits;
  double completeness_defect = 0.0;  // max |sum psi_j^2 - 1|
  double gradient_constant = 0.0;    // max |d psi_j| * gamma
  double gamma = 0.0;
};

/// Periodic bumps centred on a lattice of spacing L / ceil(L / gamma) per
/// axis, each equal to 1 on the inner half of its gamma-box, normalized by
/// sqrt(sum psi_k^2). gamma >= box length gives the single member psi = 1.
/// Requires gamma >= 4 max spacing.
Partition build_partition(const Grid& grid, double gamma);

/// max over trials of ||H u - sum_j (psi_j H psi_j u + 1/2 [[H, psi_j], psi_j] u)|| / ||H u||.
double ism_defect(const LinearOperator& op, const std::vector<ScalarField>& members,
                  const std::vector<SpinorField>& trials);
double ism_check(const LinearOperator& op, const Partition& partition, int trials,
                 std::uint64_t seed);

struct SubadditivityReport {
  double whole = 0.0;    // Tr^-(sum_j psi_j H psi_j)
  double parts = 0.0;    // sum_j Tr^-(psi_j H psi_j)
  double gap = 0.0;      // whole - parts, >= 0 when the inequality holds
  bool holds = true;
};

/// Tr^-(sum_j psi_j H psi_j) >= sum_j Tr^-(psi_j H psi_j), dense evaluation.
SubadditivityReport subadditivity_check(const PauliOperator& op, const Partition& partition,
                                        double tolerance = 1e-9);
nlohmann::json to_json(const SubadditivityReport& r);

}  // namespace paulilab
