#include "gibo/chol.hpp"

#include <Eigen/Cholesky>
#include <cmath>

#include "gibo/errors.hpp"

namespace gibo {

double CholeskyFactor::half_log_det() const {
  return L.diagonal().array().log().sum();
}

CholeskyFactor cholesky_factorize(const Eigen::MatrixXd& a) {
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success) {
    throw ConditioningError("cholesky_factorize: matrix is not positive definite");
  }
  return CholeskyFactor{llt.matrixL()};
}

CholeskyFactor cholesky_append(const CholeskyFactor& factor, const Eigen::VectorXd& cross,
                               double diagonal) {
  const int n = factor.size();
  if (cross.size() != n) {
    throw std::invalid_argument("cholesky_append: cross column has wrong length");
  }
  Eigen::VectorXd s12(n);
  if (n > 0) s12 = factor.solve_lower(cross);
  const double schur = diagonal - (n > 0 ? s12.squaredNorm() : 0.0);
  if (!(schur > 0.0)) {
    throw ConditioningError("cholesky_append: Schur complement not positive");
  }
  CholeskyFactor out;
  out.L = Eigen::MatrixXd::Zero(n + 1, n + 1);
  out.L.topLeftCorner(n, n) = factor.L;
  if (n > 0) out.L.row(n).head(n) = s12.transpose();
  out.L(n, n) = std::sqrt(schur);
  return out;
}

}  // namespace gibo
