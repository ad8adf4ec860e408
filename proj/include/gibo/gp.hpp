#pragma once

#include <Eigen/Core>

#include "gibo/chol.hpp"
#include "gibo/dataset.hpp"
#include "gibo/kernel.hpp"

namespace gibo {

struct ValuePosterior {
  double mean = 0.0;
  double variance = 0.0;
};

/// Gaussian belief over the objective's gradient at a query point.
struct JacobianPosterior {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
};

/// Diagonal term added to K(X,X) before factorization: the noise variance,
/// with a small jitter substituted in the near-noiseless regime.
double effective_noise(const KernelParams& params);

/// Kernel matrix K(X,X) + effective_noise * I over the dataset points.
Eigen::MatrixXd kernel_matrix(const Dataset& data, const KernelParams& params);

/// GP conditioned once on a dataset; queries share the Cholesky factor, so the
/// gradient belief costs no additional cubic work beyond the value posterior.
class GpPosterior {
 public:
  GpPosterior(const Dataset& data, const KernelParams& params);

  ValuePosterior value(const Eigen::VectorXd& query) const;
  JacobianPosterior jacobian(const Eigen::VectorXd& query) const;

  const CholeskyFactor& factor() const { return factor_; }
  const KernelParams& params() const { return params_; }
  int size() const { return static_cast<int>(points_.cols()); }

 private:
  KernelParams params_;
  Eigen::MatrixXd points_;  // d x n
  CholeskyFactor factor_;   // chol(K + effective_noise I), empty for n = 0
  Eigen::VectorXd alpha_;   // (K + effective_noise I)^{-1} y

  Eigen::VectorXd cross_column(const Eigen::VectorXd& query) const;
};

/// Posterior mean and variance of the objective at `query`. An empty dataset
/// yields the prior (mean 0, variance sigma_f^2).
ValuePosterior posterior_value(const Eigen::VectorXd& query, const Dataset& data,
                               const KernelParams& params);

/// Posterior over the gradient at `query`:
///   mean = grad K(q, X) (K + s^2 I)^{-1} y
///   cov  = grad2 K(q, q) - grad K(q, X) (K + s^2 I)^{-1} grad K(X, q).
/// The covariance never reads the targets. An empty dataset yields mean 0 and
/// covariance L sigma_f^2.
JacobianPosterior posterior_jacobian(const Eigen::VectorXd& query, const Dataset& data,
                                     const KernelParams& params);

/// Log marginal likelihood of the targets under the zero-mean GP.
double log_marginal_likelihood(const Dataset& data, const KernelParams& params);

}  // namespace gibo
