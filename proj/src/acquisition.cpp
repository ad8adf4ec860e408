#include "gibo/acquisition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "gibo/ascent.hpp"
#include "gibo/errors.hpp"
#include "gibo/gp.hpp"

namespace gibo {

GIContext::GIContext(Eigen::VectorXd anchor, const Dataset& window, KernelParams params,
                     double bound)
    : anchor_(std::move(anchor)), params_(std::move(params)), bound_(bound) {
  params_.validate();
  if (anchor_.size() != params_.dim()) {
    throw std::invalid_argument("GIContext: anchor/params dimension mismatch");
  }
  if (!window.empty() && window.dim() != params_.dim()) {
    throw std::invalid_argument("GIContext: window/params dimension mismatch");
  }
  noise_ = effective_noise(params_);
  const int n = window.size();
  const int d = params_.dim();
  window_.resize(d, n);
  for (int i = 0; i < n; ++i) window_.col(i) = window.point(i);

  if (n == 0) {
    base_trace_ = 0.0;
    solved_grads_.resize(0, d);
    return;
  }
  Eigen::MatrixXd k(n, n);
  for (int i = 0; i < n; ++i) {
    k(i, i) = params_.signal_variance + noise_;
    for (int j = i + 1; j < n; ++j) {
      k(i, j) = k(j, i) = se_kernel(window_.col(i), window_.col(j), params_);
    }
  }
  factor_ = cholesky_factorize(k);
  Eigen::MatrixXd grads(d, n);
  for (int i = 0; i < n; ++i) {
    grads.col(i) = se_kernel_grad1(anchor_, window_.col(i), params_);
  }
  solved_grads_ = factor_.solve_lower(grads.transpose());
  base_trace_ = solved_grads_.squaredNorm();
}

double GIContext::value(const Eigen::VectorXd& candidate) const {
  if (candidate.size() != params_.dim()) {
    throw std::invalid_argument("gi_value: candidate dimension mismatch");
  }
  const int n = window_size();
  const Eigen::VectorXd g_new = se_kernel_grad1(anchor_, candidate, params_);
  if (n == 0) {
    const double schur = params_.signal_variance + noise_;
    return g_new.squaredNorm() / schur;
  }
  Eigen::VectorXd cross(n);
  for (int i = 0; i < n; ++i) {
    cross[i] = se_kernel(window_.col(i), candidate, params_);
  }
  // Last row of the extended factor: [w^T, s] with w = L^{-1} cross.
  const Eigen::VectorXd w = factor_.solve_lower(cross);
  const double schur = params_.signal_variance + noise_ - w.squaredNorm();
  if (!(schur > 0.0)) {
    throw ConditioningError("gi_value: extended kernel matrix is not positive definite");
  }
  const Eigen::VectorXd u = g_new - solved_grads_.transpose() * w;
  return base_trace_ + u.squaredNorm() / schur;
}

double gi_value(const Eigen::VectorXd& candidate, const GIContext& ctx) {
  return ctx.value(candidate);
}

Eigen::VectorXd maximize_gi(const GIContext& ctx, int restarts, SplitMix64& rng) {
  if (restarts < 1) {
    throw std::invalid_argument("maximize_gi: restarts must be >= 1");
  }
  if (!(ctx.bound() > 0.0)) {
    throw std::invalid_argument("maximize_gi: empty search box");
  }
  const Eigen::Index d = ctx.anchor().size();
  const Eigen::VectorXd lower = ctx.anchor().array() - ctx.bound();
  const Eigen::VectorXd upper = ctx.anchor().array() + ctx.bound();

  // Coarse presample of the box; the `restarts` most promising draws seed the
  // local ascents so basin coverage does not hinge on a handful of points.
  const int presamples = std::max(restarts, 20 * static_cast<int>(d));
  std::vector<Eigen::VectorXd> draws;
  std::vector<double> draw_values;
  draws.reserve(presamples);
  draw_values.reserve(presamples);
  for (int r = 0; r < presamples; ++r) {
    Eigen::VectorXd s(d);
    for (Eigen::Index i = 0; i < d; ++i) s[i] = uniform_in(rng, lower[i], upper[i]);
    draw_values.push_back(ctx.value(s));
    draws.push_back(std::move(s));
  }
  std::vector<int> order(draws.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return draw_values[a] > draw_values[b]; });

  std::vector<Eigen::VectorXd> starts;
  starts.reserve(static_cast<size_t>(restarts) + 2 * static_cast<size_t>(d));
  for (int r = 0; r < restarts; ++r) starts.push_back(draws[order[r]]);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (double sign : {+1.0, -1.0}) {
      Eigen::VectorXd s = ctx.anchor();
      s[i] += sign * 0.5 * ctx.bound();
      starts.push_back(std::move(s));
    }
  }

  auto objective = [&ctx](const Eigen::VectorXd& x) { return ctx.value(x); };
  AscentOptions options;
  options.max_iterations = 100;
  options.step_tolerance = 1e-6 * ctx.bound();
  options.fd_step = 1e-6 * std::max(1.0, ctx.bound());

  Eigen::VectorXd best_point;
  double best_value = -std::numeric_limits<double>::infinity();
  for (const auto& start : starts) {
    const AscentResult res = bounded_maximize(objective, start, lower, upper, options);
    if (res.value > best_value) {
      best_value = res.value;
      best_point = res.point;
    }
  }
  return best_point;
}

}  // namespace gibo
