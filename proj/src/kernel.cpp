#include "gibo/kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace gibo {

KernelParams KernelParams::isotropic(int d, double lengthscale, double signal_variance,
                                     double noise_variance) {
  KernelParams p;
  p.lengthscales = Eigen::VectorXd::Constant(d, lengthscale);
  p.signal_variance = signal_variance;
  p.noise_variance = noise_variance;
  p.validate();
  return p;
}

void KernelParams::validate() const {
  if (lengthscales.size() == 0) {
    throw std::invalid_argument("KernelParams: empty lengthscales");
  }
  if (!(lengthscales.array() > 0.0).all()) {
    throw std::invalid_argument("KernelParams: lengthscales must be positive");
  }
  if (!(signal_variance > 0.0)) {
    throw std::invalid_argument("KernelParams: signal variance must be positive");
  }
  if (noise_variance < 0.0) {
    throw std::invalid_argument("KernelParams: noise variance must be non-negative");
  }
}

namespace {

void check_dims(const Eigen::VectorXd& x1, const Eigen::VectorXd& x2,
                const KernelParams& params) {
  if (x1.size() != x2.size() || x1.size() != params.lengthscales.size()) {
    throw std::invalid_argument("se_kernel: dimension mismatch");
  }
}

}  // namespace

double se_kernel(const Eigen::VectorXd& x1, const Eigen::VectorXd& x2,
                 const KernelParams& params) {
  check_dims(x1, x2, params);
  const double q =
      ((x1 - x2).array() / params.lengthscales.array()).square().sum();
  return params.signal_variance * std::exp(-0.5 * q);
}

Eigen::VectorXd se_kernel_grad1(const Eigen::VectorXd& x1, const Eigen::VectorXd& x2,
                                const KernelParams& params) {
  const double k = se_kernel(x1, x2, params);
  return (-(x1 - x2).array() / params.lengthscales.array().square() * k).matrix();
}

Eigen::MatrixXd se_kernel_hess12(const Eigen::VectorXd& x1, const Eigen::VectorXd& x2,
                                 const KernelParams& params) {
  const double k = se_kernel(x1, x2, params);
  const Eigen::VectorXd metric = params.metric_diagonal();
  const Eigen::VectorXd scaled = metric.cwiseProduct(x1 - x2);  // L (x1 - x2)
  Eigen::MatrixXd h = -scaled * scaled.transpose() * k;
  h.diagonal() += metric * k;
  return h;
}

}  // namespace gibo
