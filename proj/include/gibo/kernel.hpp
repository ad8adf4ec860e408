#pragma once

#include <Eigen/Core>

namespace gibo {

/// Hyperparameters of a squared-exponential kernel with a constant zero mean
/// function. `lengthscales` holds one positive entry per input dimension; the
/// kernel metric is L = diag(1/l_1^2, ..., 1/l_d^2). `noise_variance` is the
/// variance of the observation noise, not its standard deviation.
struct KernelParams {
  Eigen::VectorXd lengthscales;
  double signal_variance = 1.0;
  double noise_variance = 0.0;

  int dim() const { return static_cast<int>(lengthscales.size()); }

  /// Diagonal of L = diag(1/l_i^2).
  Eigen::VectorXd metric_diagonal() const {
    return lengthscales.array().square().inverse().matrix();
  }

  static KernelParams isotropic(int d, double lengthscale, double signal_variance,
                                double noise_variance);

  /// Throws std::invalid_argument on non-positive lengthscales or signal
  /// variance, or negative noise variance.
  void validate() const;
};

/// k(x1, x2) = sigma_f^2 exp(-1/2 (x1-x2)^T L (x1-x2)).
double se_kernel(const Eigen::VectorXd& x1, const Eigen::VectorXd& x2,
                 const KernelParams& params);

/// dk/dx1 = -L (x1 - x2) k(x1, x2). The derivative with respect to the second
/// argument is the negation.
Eigen::VectorXd se_kernel_grad1(const Eigen::VectorXd& x1, const Eigen::VectorXd& x2,
                                const KernelParams& params);

/// Mixed second derivative d^2k/dx1 dx2 = L (I - (x1-x2)(x1-x2)^T L) k(x1, x2).
/// Equals -d^2k/dx1^2; at x1 == x2 it reduces to L sigma_f^2.
Eigen::MatrixXd se_kernel_hess12(const Eigen::VectorXd& x1, const Eigen::VectorXd& x2,
                                 const KernelParams& params);

}  // namespace gibo
