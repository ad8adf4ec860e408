#include "gibo/gp.hpp"

#include <cmath>

namespace gibo {

namespace {
constexpr double kJitterScale = 1e-8;
constexpr double kNoiseFloor = 1e-8;
}  // namespace

double effective_noise(const KernelParams& params) {
  if (params.noise_variance < kNoiseFloor) {
    return params.noise_variance + kJitterScale * params.signal_variance;
  }
  return params.noise_variance;
}

Eigen::MatrixXd kernel_matrix(const Dataset& data, const KernelParams& params) {
  const int n = data.size();
  Eigen::MatrixXd k(n, n);
  for (int i = 0; i < n; ++i) {
    k(i, i) = params.signal_variance + effective_noise(params);
    for (int j = i + 1; j < n; ++j) {
      k(i, j) = k(j, i) = se_kernel(data.point(i), data.point(j), params);
    }
  }
  return k;
}

GpPosterior::GpPosterior(const Dataset& data, const KernelParams& params)
    : params_(params) {
  params_.validate();
  if (data.empty()) {
    points_.resize(params.dim(), 0);
    return;
  }
  if (data.dim() != params.dim()) {
    throw std::invalid_argument("GpPosterior: dataset/params dimension mismatch");
  }
  points_ = data.points_matrix();
  factor_ = cholesky_factorize(kernel_matrix(data, params_));
  alpha_ = factor_.solve(data.targets_vector());
}

Eigen::VectorXd GpPosterior::cross_column(const Eigen::VectorXd& query) const {
  const int n = size();
  Eigen::VectorXd k(n);
  for (int i = 0; i < n; ++i) k[i] = se_kernel(query, points_.col(i), params_);
  return k;
}

ValuePosterior GpPosterior::value(const Eigen::VectorXd& query) const {
  if (size() == 0) return {0.0, params_.signal_variance};
  const Eigen::VectorXd k = cross_column(query);
  const Eigen::VectorXd v = factor_.solve_lower(k);
  ValuePosterior out;
  out.mean = k.dot(alpha_);
  out.variance = std::max(0.0, params_.signal_variance - v.squaredNorm());
  return out;
}

JacobianPosterior GpPosterior::jacobian(const Eigen::VectorXd& query) const {
  const int d = params_.dim();
  JacobianPosterior out;
  if (size() == 0) {
    out.mean = Eigen::VectorXd::Zero(d);
    out.covariance = se_kernel_hess12(query, query, params_);
    return out;
  }
  const int n = size();
  // Columns of g are the kernel gradients w.r.t. the query point.
  Eigen::MatrixXd g(d, n);
  for (int i = 0; i < n; ++i) g.col(i) = se_kernel_grad1(query, points_.col(i), params_);
  const Eigen::MatrixXd v = factor_.solve_lower(g.transpose());  // n x d
  out.mean = g * alpha_;
  out.covariance = se_kernel_hess12(query, query, params_) - v.transpose() * v;
  return out;
}

ValuePosterior posterior_value(const Eigen::VectorXd& query, const Dataset& data,
                               const KernelParams& params) {
  return GpPosterior(data, params).value(query);
}

JacobianPosterior posterior_jacobian(const Eigen::VectorXd& query, const Dataset& data,
                                     const KernelParams& params) {
  return GpPosterior(data, params).jacobian(query);
}

double log_marginal_likelihood(const Dataset& data, const KernelParams& params) {
  const int n = data.size();
  if (n == 0) return 0.0;
  const CholeskyFactor factor = cholesky_factorize(kernel_matrix(data, params));
  const Eigen::VectorXd y = data.targets_vector();
  const Eigen::VectorXd v = factor.solve_lower(y);
  return -0.5 * v.squaredNorm() - factor.half_log_det() -
         0.5 * n * std::log(2.0 * M_PI);
}

}  // namespace gibo
