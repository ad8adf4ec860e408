#pragma once

#include <Eigen/Core>
#include <functional>

namespace gibo {

struct AscentOptions {
  int max_iterations = 100;
  /// Stop once the accepted step is below this infinity norm.
  double step_tolerance = 1e-7;
  /// Central finite-difference step for the gradient (clamped to the box).
  double fd_step = 1e-6;
};

struct AscentResult {
  Eigen::VectorXd point;
  double value = 0.0;
  int iterations = 0;
};

/// Maximizes f over the box [lower, upper] from x0 by BFGS with backtracking
/// line search; iterates are projected onto the box and gradients come from
/// box-clamped central finite differences. Deterministic; the returned value is
/// never below f(clamp(x0)).
AscentResult bounded_maximize(const std::function<double(const Eigen::VectorXd&)>& f,
                              const Eigen::VectorXd& x0, const Eigen::VectorXd& lower,
                              const Eigen::VectorXd& upper,
                              const AscentOptions& options = {});

}  // namespace gibo
