#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "gibo/gibo.hpp"
#include "gibo/kernel.hpp"
#include "gibo/rng.hpp"

namespace gibo {

/// Scaled upper bound on the expected distance between random points in the
/// unit d-cube, normalized so delta_sub(2) = 0.1. Sets the lengthscale scale
/// at which test functions stay comparably hard across dimensions.
double delta_sub(int d);

/// Isotropic lengthscale draw: uniform on
/// [2 delta_sub(d) (1-gamma), 2 delta_sub(d) (1+gamma)] with gamma = 0.3.
double sample_lengthscale(int d, SplitMix64& rng);

/// Frozen test function over [0,1]^d: the noiseless GP posterior mean through
/// a joint prior sample at 1000 Sobol support points, with a cached
/// approximate global maximum. Evaluation is deterministic; observation noise
/// is added only by evaluate_noisy.
struct SyntheticObjective {
  int dim = 0;
  std::uint64_t seed = 0;
  double lengthscale = 0.0;        // isotropic, sampled at generation
  double signal_variance = 1.0;
  double noise_std = 0.1;          // evaluation noise sigma
  Eigen::MatrixXd support;         // d x n support points (columns)
  Eigen::VectorXd values;          // objective values at the support points
  Eigen::VectorXd weights;         // interpolation weights alpha
  Eigen::VectorXd max_point;       // approximate global maximizer
  double max_value = 0.0;
  bool max_converged = true;

  /// Noiseless objective value J(x).
  double mean(const Eigen::VectorXd& x) const;
  /// Analytic gradient of J.
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const;
  /// Generating kernel parameters (noise variance = noise_std^2).
  KernelParams params() const;
};

/// Number of jointly sampled support values per objective.
inline constexpr int kSupportPoints = 1000;

/// Builds the test function for a seed: Sobol support set, lengthscale draw,
/// joint prior sample, interpolating posterior mean, approximate global max.
SyntheticObjective generate_objective(int d, std::uint64_t seed);

struct GlobalMax {
  Eigen::VectorXd point;
  double value = 0.0;
  bool converged = true;
};

/// Deterministic gradient ascent on the noiseless surface, multistarted from
/// the highest support values (the best support point always included), each
/// run stopping at step < 1e-8 or 10^4 iterations. The result is never below
/// the best support value.
GlobalMax approx_global_max(const SyntheticObjective& objective);

/// One noisy observation y = J(x) + N(0, noise_std^2).
double evaluate_noisy(const SyntheticObjective& objective, const Eigen::VectorXd& x,
                      SplitMix64& rng);

/// Per-evaluation normalized regret r_k = (f* - J(xhat_k)) / (f* - J(x0)) with
/// x0 the domain center. The best guess xhat_k is the sampled point with the
/// highest noiseless value so far (earliest on ties); set `select_by_observed`
/// to pick by noisy observation instead. Throws on a degenerate normalizer.
std::vector<double> normalized_regret(const SyntheticObjective& objective,
                                      const RunHistory& history,
                                      bool select_by_observed = false);

/// Replayable self-describing serialization (JSON).
void save_objective(const SyntheticObjective& objective, const std::string& path);
SyntheticObjective load_objective(const std::string& path);

}  // namespace gibo
