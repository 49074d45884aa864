#pragma once

#include <cstdint>
#include <string>

#include <Eigen/Core>

#include "paulilab/linear_operator.hpp"

namespace paulilab {

struct EigenPairs {
  Eigen::VectorXd values;    // ascending
  Eigen::MatrixXcd vectors;  // Euclidean-orthonormal columns
  Eigen::VectorXd residuals; // ||H x - lambda x|| per pair
  bool converged = true;
  int applies = 0;  // operator applications (columns)
  int cycles = 0;
  std::string message;
};

/// All eigenpairs with eigenvalue <= threshold by full diagonalization.
EigenPairs dense_eigenpairs(const LinearOperator& op, double threshold);
EigenPairs dense_eigenpairs(const Eigen::MatrixXcd& matrix, double threshold);

struct KrylovOptions {
  int block_size = 4;
  int blocks_per_cycle = 24;  // Krylov blocks added per restart cycle
  int max_cycles = 2000;
  double tol = 1e-10;         // residual <= tol * max(1, |lambda|)
  std::uint64_t seed = 1;
  /// Optional starting vectors (e.g. eigenvectors of a nearby operator).
  Eigen::MatrixXcd initial;
};

/// All eigenpairs with eigenvalue <= threshold of a Hermitian operator whose
/// spectrum lies below `shift`, by restarted block Krylov iteration on
/// shift * I - H with full reorthogonalization, locking of converged pairs
/// and a final verification pass from a fresh random block.
EigenPairs krylov_eigenpairs(const LinearOperator& op, double threshold,
                             double shift, const KrylovOptions& options = {});

}  // namespace paulilab
