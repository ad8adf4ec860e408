#pragma once

#include <Eigen/Core>
#include <cmath>
#include <string>
#include <utility>

#include "gibo/rng.hpp"
#include "gibo/runstats.hpp"

namespace gibo {

/// Reward transform -log(1 + stage cost): strictly decreasing in the cost and
/// bounded enough to keep diverging rollouts finite.
inline double transformed_reward(double stage_cost) { return -std::log1p(stage_cost); }

/// Discrete-time infinite-horizon average-cost LQR problem
///   x_{t+1} = A x_t + B u_t + w_t,  w_t ~ N(0, W),
///   cost per step x^T Q x + u^T R u,
/// with the Riccati-optimal gain and cost cached at construction.
struct LQRInstance {
  Eigen::MatrixXd A, B, Q, R, W;
  Eigen::MatrixXd P;      // Riccati solution
  Eigen::MatrixXd K_opt;  // optimal feedback gain, u = K x
  double J_opt = 0.0;     // optimal average cost Tr(W P)

  int state_dim() const { return static_cast<int>(A.rows()); }
  int input_dim() const { return static_cast<int>(B.cols()); }
};

/// Builds an instance and caches its Riccati solution.
LQRInstance make_instance(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                          const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R,
                          const Eigen::MatrixXd& W);

/// The 3-state marginally unstable instance used for benchmarking: tridiagonal
/// A with diagonal 1.01, B = I, Q = 1e-3 I, R = I, W = I.
LQRInstance paper_instance();

/// Solves P = A^T P A - A^T P B (R + B^T P B)^{-1} B^T P A + Q by the
/// structure-preserving doubling iteration and returns (P, K) with
/// K = -(R + B^T P B)^{-1} B^T P A. Throws StabilityError when the iteration
/// does not converge (non-stabilizable input).
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> solve_dare(const Eigen::MatrixXd& A,
                                                       const Eigen::MatrixXd& B,
                                                       const Eigen::MatrixXd& Q,
                                                       const Eigen::MatrixXd& R);

/// Solves S = A S A^T + W for a stable A. Throws StabilityError otherwise.
Eigen::MatrixXd solve_dlyap(const Eigen::MatrixXd& A, const Eigen::MatrixXd& W);

/// Largest eigenvalue magnitude.
double spectral_radius(const Eigen::MatrixXd& m);

/// Row-major flattening between the gain matrix and the optimizer's parameter
/// vector; round-trips exactly.
Eigen::VectorXd flatten_gain(const Eigen::MatrixXd& K);
Eigen::MatrixXd unflatten_gain(const Eigen::VectorXd& theta, int input_dim,
                               int state_dim);

struct RelativeError {
  double value = 0.0;     // (J(K) - J*) / J*; +infinity when not stabilizing
  bool stabilizing = false;
};

/// Closed-form relative cost gap of a gain via the discrete Lyapunov equation:
///   J(K) - J* = Tr( S(K) (K - K*)^T (R + B^T P B) (K - K*) ).
RelativeError relative_error(const Eigen::MatrixXd& K_hat, const LQRInstance& instance);
RelativeError relative_error(const Eigen::VectorXd& theta, const LQRInstance& instance);

/// True iff A + B K(theta) has spectral radius < 1.
bool is_stabilizing(const Eigen::VectorXd& theta, const LQRInstance& instance);

struct RolloutConfig {
  int trajectory_length = 300;  // steps per trajectory
  int trajectories = 1;         // independent trajectories per oracle call
};

/// Timesteps consumed by one oracle call.
inline long long rollout_timesteps(const RolloutConfig& config) {
  return static_cast<long long>(config.trajectory_length) * config.trajectories;
}

/// Policy-search oracle: simulates `trajectories` rollouts of length
/// `trajectory_length` from x0 = 0 under u = K x with process noise W, and
/// returns the episodic return, i.e. the per-trajectory sum of transformed
/// rewards -log(1 + stage cost), averaged over trajectories. Diverging
/// trajectories (state norm above 1e12) are truncated; the remaining steps
/// take the worst transformed reward seen in that trajectory. A non-null
/// `normalizer` applies streaming state normalization before the policy.
double lqr_oracle(const Eigen::VectorXd& theta, const LQRInstance& instance,
                  const RolloutConfig& config, SplitMix64& rng,
                  StateNormalizer* normalizer = nullptr);

/// Replayable serialization of the instance and its cached optimum (JSON).
void save_instance(const LQRInstance& instance, const std::string& path);
LQRInstance load_instance(const std::string& path);

}  // namespace gibo
