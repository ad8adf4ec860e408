#include "gibo/ascent.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace gibo {

namespace {

Eigen::VectorXd clamp_to_box(Eigen::VectorXd x, const Eigen::VectorXd& lower,
                             const Eigen::VectorXd& upper) {
  return x.cwiseMax(lower).cwiseMin(upper);
}

/// Central differences with both sample points kept inside the box; falls back
/// to one-sided differences at the boundary.
Eigen::VectorXd fd_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                            const Eigen::VectorXd& x, const Eigen::VectorXd& lower,
                            const Eigen::VectorXd& upper, double h) {
  const Eigen::Index d = x.size();
  Eigen::VectorXd g(d);
  Eigen::VectorXd probe = x;
  for (Eigen::Index i = 0; i < d; ++i) {
    const double hi = std::min(x[i] + h, upper[i]);
    const double lo = std::max(x[i] - h, lower[i]);
    if (hi <= lo) {
      g[i] = 0.0;
      continue;
    }
    probe[i] = hi;
    const double fp = f(probe);
    probe[i] = lo;
    const double fm = f(probe);
    probe[i] = x[i];
    g[i] = (fp - fm) / (hi - lo);
  }
  return g;
}

}  // namespace

AscentResult bounded_maximize(const std::function<double(const Eigen::VectorXd&)>& f,
                              const Eigen::VectorXd& x0, const Eigen::VectorXd& lower,
                              const Eigen::VectorXd& upper, const AscentOptions& options) {
  if (lower.size() != x0.size() || upper.size() != x0.size()) {
    throw std::invalid_argument("bounded_maximize: bound dimension mismatch");
  }
  if ((lower.array() > upper.array()).any()) {
    throw std::invalid_argument("bounded_maximize: empty box");
  }

  const Eigen::Index d = x0.size();
  Eigen::VectorXd x = clamp_to_box(x0, lower, upper);
  double fx = f(x);
  if (!std::isfinite(fx)) return {x, fx, 0};

  Eigen::MatrixXd h_inv = Eigen::MatrixXd::Identity(d, d);
  Eigen::VectorXd grad = fd_gradient(f, x, lower, upper, options.fd_step);

  AscentResult result{x, fx, 0};
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    result.iterations = iter + 1;
    Eigen::VectorXd direction = h_inv * grad;
    if (direction.dot(grad) <= 0.0) {
      // Curvature information went stale; fall back to steepest ascent.
      h_inv.setIdentity();
      direction = grad;
    }
    const double dnorm = direction.lpNorm<Eigen::Infinity>();
    if (dnorm < 1e-14) break;

    // Backtracking line search on the projected point.
    double t = 1.0;
    Eigen::VectorXd x_new;
    double f_new = -std::numeric_limits<double>::infinity();
    bool accepted = false;
    for (int ls = 0; ls < 30; ++ls) {
      x_new = clamp_to_box(x + t * direction, lower, upper);
      if ((x_new - x).lpNorm<Eigen::Infinity>() < 1e-18) break;
      f_new = f(x_new);
      if (std::isfinite(f_new) &&
          f_new > fx + 1e-4 * grad.dot(x_new - x)) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;

    const Eigen::VectorXd step = x_new - x;
    const Eigen::VectorXd grad_new = fd_gradient(f, x_new, lower, upper, options.fd_step);
    const Eigen::VectorXd dg = grad_new - grad;  // gradient change (ascent convention)
    const double sy = -step.dot(dg);             // s^T y for the minimization form
    if (sy > 1e-12 * step.norm() * dg.norm()) {
      // BFGS update of the inverse Hessian approximation (minimizing -f).
      const Eigen::VectorXd hy = h_inv * (-dg);
      const double yhy = (-dg).dot(hy);
      h_inv += ((sy + yhy) / (sy * sy)) * (step * step.transpose()) -
               (hy * step.transpose() + step * hy.transpose()) / sy;
    } else {
      h_inv.setIdentity();
    }

    x = x_new;
    fx = f_new;
    grad = grad_new;
    if (fx > result.value) {
      result.point = x;
      result.value = fx;
    }
    if (step.lpNorm<Eigen::Infinity>() < options.step_tolerance) break;
  }
  return result;
}

}  // namespace gibo
