#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <utility>

namespace gibo {

/// Streaming per-coordinate mean and squared-distance accumulator (Welford).
/// Only the diagonal of the covariance is tracked.
struct WelfordState {
  long long count = 0;
  Eigen::VectorXd mean;     // running mean M_n
  Eigen::VectorXd sq_dist;  // running squared distance from the mean S_n

  explicit WelfordState(int dim = 0)
      : mean(Eigen::VectorXd::Zero(dim)), sq_dist(Eigen::VectorXd::Zero(dim)) {}
};

/// One update step:
///   M_n = M_{n-1} + (x - M_{n-1}) / n,
///   S_n = S_{n-1} + (x - M_{n-1}) .* (x - M_n).
inline WelfordState welford_update(WelfordState state, const Eigen::VectorXd& x) {
  if (state.count == 0 && state.mean.size() == 0) {
    state.mean = Eigen::VectorXd::Zero(x.size());
    state.sq_dist = Eigen::VectorXd::Zero(x.size());
  }
  if (x.size() != state.mean.size()) {
    throw std::invalid_argument("welford_update: dimension mismatch");
  }
  ++state.count;
  const Eigen::VectorXd delta = x - state.mean;
  state.mean += delta / static_cast<double>(state.count);
  state.sq_dist.array() += delta.array() * (x - state.mean).array();
  return state;
}

/// (mean, unbiased sample variance S_n / (n-1)). With fewer than two samples
/// the variance falls back to ones so early consumers leave data untouched.
inline std::pair<Eigen::VectorXd, Eigen::VectorXd> welford_finalize(
    const WelfordState& state) {
  if (state.count < 2) {
    return {state.mean, Eigen::VectorXd::Ones(state.mean.size())};
  }
  return {state.mean, state.sq_dist / static_cast<double>(state.count - 1)};
}

/// (s - mean) / std element-wise; std entries below 1e-8 are clamped to 1
/// before dividing.
inline Eigen::VectorXd normalize_state(const Eigen::VectorXd& s,
                                       const Eigen::VectorXd& mean,
                                       const Eigen::VectorXd& stddev) {
  Eigen::VectorXd safe = stddev;
  for (Eigen::Index i = 0; i < safe.size(); ++i) {
    if (safe[i] < 1e-8) safe[i] = 1.0;
  }
  return ((s - mean).array() / safe.array()).matrix();
}

/// Streaming normalizer for environment states: transforms with the statistics
/// of previously seen states, then folds the new state in.
class StateNormalizer {
 public:
  explicit StateNormalizer(int dim) : state_(dim) {}

  Eigen::VectorXd operator()(const Eigen::VectorXd& s) {
    const auto [mean, variance] = welford_finalize(state_);
    const Eigen::VectorXd normalized =
        normalize_state(s, mean, variance.cwiseSqrt());
    state_ = welford_update(std::move(state_), s);
    return normalized;
  }

  const WelfordState& stats() const { return state_; }

 private:
  WelfordState state_;
};

}  // namespace gibo
