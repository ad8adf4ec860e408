#pragma once

#include <Eigen/Core>

namespace gibo {

/// Lower-triangular Cholesky factor of a symmetric positive definite matrix,
/// typically a noise-augmented kernel matrix K(X,X) + sigma^2 I.
struct CholeskyFactor {
  Eigen::MatrixXd L;

  int size() const { return static_cast<int>(L.rows()); }

  /// Solves (L L^T) x = b.
  template <typename Derived>
  typename Derived::PlainObject solve(const Eigen::MatrixBase<Derived>& b) const {
    typename Derived::PlainObject x = L.triangularView<Eigen::Lower>().solve(b.derived());
    L.triangularView<Eigen::Lower>().adjoint().solveInPlace(x);
    return x;
  }

  /// Forward substitution L x = b.
  template <typename Derived>
  typename Derived::PlainObject solve_lower(const Eigen::MatrixBase<Derived>& b) const {
    return L.triangularView<Eigen::Lower>().solve(b.derived());
  }

  /// Sum of log-diagonal entries; half the log determinant of L L^T.
  double half_log_det() const;
};

/// Batch factorization. Throws ConditioningError if the matrix is not positive
/// definite.
CholeskyFactor cholesky_factorize(const Eigen::MatrixXd& a);

/// Extends the factor of an n x n matrix to cover one appended row/column with
/// cross terms `cross` (length n) and diagonal entry `diagonal`:
///   S11 = L,  s12 = L \ cross,  s22 = sqrt(diagonal - s12^T s12).
/// Equals the batch factorization of the extended matrix. Throws
/// ConditioningError when the Schur complement is not positive, which signals a
/// near-duplicate point relative to the noise level.
CholeskyFactor cholesky_append(const CholeskyFactor& factor, const Eigen::VectorXd& cross,
                               double diagonal);

}  // namespace gibo
