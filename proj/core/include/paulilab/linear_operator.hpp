#pragma once

#include <Eigen/Core>

namespace paulilab {

/// Hermitian operator on C^n (Euclidean inner product) applied to blocks of
/// column vectors. Implementations must be reentrant.
class LinearOperator {
 public:
  virtual ~LinearOperator() = default;
  virtual Eigen::Index dim() const = 0;
  /// Y = H X, column by column. Y is resized by the callee.
  virtual void apply(const Eigen::MatrixXcd& x, Eigen::MatrixXcd& y) const = 0;
};

/// Dense matrix of the operator, assembled by applying it to unit vectors.
Eigen::MatrixXcd dense_matrix(const LinearOperator& op);

}  // namespace paulilab
