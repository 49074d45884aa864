#include "paulilab/eigensolver.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace paulilab {

using Mat = Eigen::MatrixXcd;
using Complex = std::complex<double>;

Eigen::MatrixXcd dense_matrix(const LinearOperator& op) {
  const Eigen::Index n = op.dim();
  Mat out(n, n);
  const Eigen::Index chunk = 64;
  Mat y;
  for (Eigen::Index c0 = 0; c0 < n; c0 += chunk) {
    const Eigen::Index w = std::min(chunk, n - c0);
    Mat x = Mat::Zero(n, w);
    for (Eigen::Index j = 0; j < w; ++j) x(c0 + j, j) = 1.0;
    op.apply(x, y);
    out.middleCols(c0, w) = y;
  }
  return out;
}

EigenPairs dense_eigenpairs(const Eigen::MatrixXcd& matrix, double threshold) {
  const Mat sym = 0.5 * (matrix + matrix.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> es(sym);
  if (es.info() != Eigen::Success) throw std::runtime_error("dense eigensolver failed");
  Eigen::Index count = 0;
  while (count < es.eigenvalues().size() && es.eigenvalues()[count] <= threshold) ++count;
  EigenPairs out;
  out.values = es.eigenvalues().head(count);
  out.vectors = es.eigenvectors().leftCols(count);
  out.residuals.resize(count);
  for (Eigen::Index i = 0; i < count; ++i) {
    out.residuals[i] =
        (matrix * out.vectors.col(i) - out.values[i] * out.vectors.col(i)).norm();
  }
  return out;
}

EigenPairs dense_eigenpairs(const LinearOperator& op, double threshold) {
  EigenPairs out = dense_eigenpairs(dense_matrix(op), threshold);
  out.applies = static_cast<int>(op.dim());
  return out;
}

namespace {

class Orthonormalizer {
 public:
  Orthonormalizer(Eigen::Index n, std::uint64_t seed) : n_(n), gen_(seed) {}

  Mat random(Eigen::Index cols) {
    Mat m(n_, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
      for (Eigen::Index i = 0; i < n_; ++i) m(i, j) = Complex(nd_(gen_), nd_(gen_));
    return m;
  }

  // Orthonormalizes the columns of w against the column spaces in `against`
  // and against each other. Deficient columns are replaced by random vectors
  // while the complement still has room; otherwise they are dropped.
  Mat run(Mat w, const std::vector<Eigen::Ref<const Mat>>& against) {
    Eigen::Index used = 0;
    for (const auto& q : against) used += q.cols();
    const Eigen::VectorXd norms = w.colwise().norm().transpose();
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : against) {
        if (q.cols()) w.noalias() -= q * (q.adjoint() * w);
      }
    }
    Mat out(n_, std::min<Eigen::Index>(w.cols(), std::max<Eigen::Index>(n_ - used, 0)));
    Eigen::Index count = 0;
    for (Eigen::Index j = 0; j < w.cols() && count < out.cols(); ++j) {
      Eigen::VectorXcd v = w.col(j);
      double before = norms[j];
      for (int attempt = 0; attempt < 4; ++attempt) {
        for (int pass = 0; pass < 2; ++pass) {
          if (attempt > 0) {
            for (const auto& q : against) {
              if (q.cols()) v -= q * (q.adjoint() * v);
            }
          }
          if (count) v -= out.leftCols(count) * (out.leftCols(count).adjoint() * v);
        }
        const double after = v.norm();
        if (before > 0.0 && after > 1e-8 * before) {
          out.col(count++) = v / after;
          break;
        }
        v = random(1).col(0);
        before = v.norm();
      }
    }
    out.conservativeResize(Eigen::NoChange, count);
    return out;
  }

 private:
  Eigen::Index n_;
  std::mt19937_64 gen_;
  std::normal_distribution<double> nd_;
};

}  // namespace

EigenPairs krylov_eigenpairs(const LinearOperator& op, double threshold, double shift,
                             const KrylovOptions& opt) {
  const Eigen::Index n = op.dim();
  if (opt.block_size < 1 || opt.blocks_per_cycle < 2) {
    throw std::invalid_argument("krylov: block size and cycle length must be positive");
  }
  const Eigen::Index b = opt.block_size;
  const Eigen::Index max_basis = b * opt.blocks_per_cycle;
  Orthonormalizer orth(n, opt.seed);
  EigenPairs out;

  auto apply_s = [&](const Mat& x) {
    Mat hx;
    op.apply(x, hx);
    out.applies += static_cast<int>(x.cols());
    return Mat(shift * x - hx);
  };

  Mat locked(n, 0);
  Mat kept(n, 0), s_kept(n, 0), start(n, 0);
  if (opt.initial.cols() > 0) {
    if (opt.initial.rows() != n) throw std::invalid_argument("krylov: initial block has wrong size");
    start = orth.run(opt.initial, {});
  }
  if (start.cols() < b) {
    Mat fill(n, start.cols() + b);
    fill << start, orth.random(b);
    start = orth.run(fill, {});
  }
  bool verified = false;
  out.converged = false;
  // A pair in a cluster whose other members are already locked can stall just
  // above tol, since the locked vectors are only accurate to tol.
  double best_open = std::numeric_limits<double>::infinity();
  int stalled_cycles = 0;

  const Eigen::Index capacity = max_basis + 2 * b;
  Mat basis(n, capacity), s_basis(n, capacity);
  Mat t(capacity, capacity);
  for (int cycle = 0; cycle < opt.max_cycles; ++cycle) {
    out.cycles = cycle + 1;
    Eigen::Index m = kept.cols();
    basis.leftCols(m) = kept;
    s_basis.leftCols(m) = s_kept;
    t.topLeftCorner(m, m) = kept.adjoint() * s_kept;
    auto append = [&](const Mat& block, const Mat& s_block) {
      const Eigen::Index c = block.cols();
      basis.middleCols(m, c) = block;
      s_basis.middleCols(m, c) = s_block;
      t.block(0, m, m + c, c) = basis.leftCols(m + c).adjoint() * s_block;
      t.block(m, 0, c, m) = t.block(0, m, m, c).adjoint();
      m += c;
    };
    Mat block = orth.run(start, {locked, kept});
    while (block.cols() > 0) {
      append(block, apply_s(block));
      if (m >= max_basis) break;
      block = orth.run(s_basis.middleCols(m - block.cols(), block.cols()),
                       {locked, basis.leftCols(m)});
    }
    if (m == 0) {
      out.converged = true;  // complement exhausted
      break;
    }
    const bool exhausted = locked.cols() + m >= n;

    Mat tm = t.topLeftCorner(m, m);
    tm = 0.5 * (tm + tm.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Mat> es(tm);
    // Largest theta first, i.e. smallest lambda = shift - theta first.
    const Mat coeff = es.eigenvectors().rowwise().reverse();
    const Eigen::VectorXd theta = es.eigenvalues().reverse();
    Eigen::VectorXd lambda = Eigen::VectorXd::Constant(m, shift) - theta;

    // Ritz vectors and residuals are formed lazily, leading columns first.
    Mat x(n, 0), sx(n, 0);
    std::vector<double> res;
    auto ensure = [&](Eigen::Index k) {
      k = std::min(k, m);
      const Eigen::Index have = x.cols();
      if (k <= have) return;
      const Eigen::Index c = k - have;
      x.conservativeResize(Eigen::NoChange, k);
      sx.conservativeResize(Eigen::NoChange, k);
      x.rightCols(c).noalias() = basis.leftCols(m) * coeff.middleCols(have, c);
      sx.rightCols(c).noalias() = s_basis.leftCols(m) * coeff.middleCols(have, c);
      for (Eigen::Index i = have; i < k; ++i) {
        res.push_back((sx.col(i) - theta[i] * x.col(i)).norm());
      }
    };
    auto is_converged = [&](Eigen::Index i) {
      ensure(i + 1);
      return exhausted || res[i] <= opt.tol * std::max(1.0, std::abs(lambda[i]));
    };
    // The lowest open Ritz value certifies the threshold once an eigenvalue
    // is known to lie within its residual and that interval is above it.
    auto certified_above = [&](Eigen::Index i) {
      ensure(i + 1);
      return exhausted ||
             (res[i] <= 1e-6 * std::max(1.0, std::abs(lambda[i])) &&
              lambda[i] - res[i] > threshold);
    };

    auto stalled = [&](Eigen::Index i) {
      return stalled_cycles >= 3 && res[i] <= 1e3 * opt.tol * std::max(1.0, std::abs(lambda[i]));
    };
    Eigen::Index first_open = 0;
    while (first_open < m) {
      ensure(first_open + b);
      const bool ok = is_converged(first_open) || (first_open == 0 && stalled(0));
      if (!(ok && lambda[first_open] <= threshold)) break;
      ++first_open;
    }
    if (first_open > 0 || first_open == m) {
      best_open = std::numeric_limits<double>::infinity();
      stalled_cycles = 0;
    } else if (res[0] < 0.5 * best_open) {
      best_open = res[0];
      stalled_cycles = 0;
    } else {
      ++stalled_cycles;
    }
    if (first_open > 0) {
      const Eigen::Index old = locked.cols();
      locked.conservativeResize(Eigen::NoChange, old + first_open);
      locked.rightCols(first_open) = x.leftCols(first_open);
      verified = false;
    }
    const bool above = first_open == m || certified_above(first_open);
    if (above && (verified || exhausted)) {
      out.converged = true;
      break;
    }
    if (locked.cols() >= n) {
      out.converged = true;
      break;
    }
    if (above) {
      // Restart once from fresh random directions to catch missed eigenvectors.
      verified = true;
      kept.resize(n, 0);
      s_kept.resize(n, 0);
      start = orth.random(b);
      continue;
    }
    const Eigen::Index keep = std::min<Eigen::Index>(2 * b, m - first_open);
    ensure(first_open + keep);
    kept = x.middleCols(first_open, keep);
    s_kept = sx.middleCols(first_open, keep);
    const Eigen::Index rcols = std::min<Eigen::Index>(b, keep);
    start.resize(n, rcols);
    for (Eigen::Index j = 0; j < rcols; ++j) {
      start.col(j) = sx.col(first_open + j) - theta[first_open + j] * x.col(first_open + j);
    }
  }
  if (!out.converged) out.message = "krylov: no convergence within the cycle limit";

  // Final Rayleigh-Ritz over the locked space with true residuals.
  if (locked.cols() > 0) {
    Mat h_locked;
    op.apply(locked, h_locked);
    out.applies += static_cast<int>(locked.cols());
    Mat t = locked.adjoint() * h_locked;
    t = 0.5 * (t + t.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Mat> es(t);
    Eigen::Index count = 0;
    while (count < t.rows() && es.eigenvalues()[count] <= threshold) ++count;
    out.values = es.eigenvalues().head(count);
    out.vectors = locked * es.eigenvectors().leftCols(count);
    const Mat hv = h_locked * es.eigenvectors().leftCols(count);
    out.residuals.resize(count);
    for (Eigen::Index i = 0; i < count; ++i) {
      out.residuals[i] = (hv.col(i) - out.values[i] * out.vectors.col(i)).norm();
    }
  } else {
    out.values.resize(0);
    out.vectors.resize(n, 0);
    out.residuals.resize(0);
  }
  return out;
}

}  // namespace paulilab
