#pragma once

#include <Eigen/Core>

#include "gibo/chol.hpp"
#include "gibo/dataset.hpp"
#include "gibo/kernel.hpp"
#include "gibo/rng.hpp"

namespace gibo {

/// Gradient-information acquisition around an anchor point. Scores a candidate
/// query by how much observing it would shrink the uncertainty of the gradient
/// belief at the anchor. The score never reads observed targets: it depends
/// only on the geometry of the conditioning set.
class GIContext {
 public:
  /// `window` supplies the conditioning points (targets are ignored); `bound`
  /// is the per-dimension half-width of the search box around the anchor.
  GIContext(Eigen::VectorXd anchor, const Dataset& window, KernelParams params,
            double bound);

  /// Tr( gradK(a, Xh) (K(Xh,Xh) + s^2 I)^{-1} gradK(a, Xh)^T ) for the virtual
  /// set Xh = [window, candidate], evaluated through a rank-one extension of
  /// the window's Cholesky factor.
  double value(const Eigen::VectorXd& candidate) const;

  const Eigen::VectorXd& anchor() const { return anchor_; }
  double bound() const { return bound_; }
  const KernelParams& params() const { return params_; }
  int window_size() const { return static_cast<int>(window_.cols()); }

 private:
  Eigen::VectorXd anchor_;
  Eigen::MatrixXd window_;        // d x n conditioning points
  KernelParams params_;
  double bound_;
  double noise_;                  // effective noise on the diagonal
  CholeskyFactor factor_;         // chol(K(X,X) + noise I)
  Eigen::MatrixXd solved_grads_;  // L^{-1} gradK(X, anchor), n x d
  double base_trace_;             // score of the window alone
};

/// Acquisition value of `candidate` given the context.
double gi_value(const Eigen::VectorXd& candidate, const GIContext& ctx);

/// Maximizes the acquisition over the box [anchor - bound, anchor + bound] by
/// deterministic seeded multistart: `restarts` uniform draws in the box plus
/// axis points at half-bound offsets, each refined by bounded quasi-Newton
/// ascent with finite-difference gradients. Ties keep the earliest start.
Eigen::VectorXd maximize_gi(const GIContext& ctx, int restarts, SplitMix64& rng);

}  // namespace gibo
