#pragma once

#include <Eigen/Core>
#include <functional>
#include <optional>
#include <vector>

#include "gibo/dataset.hpp"
#include "gibo/hyperfit.hpp"
#include "gibo/kernel.hpp"
#include "gibo/rng.hpp"

namespace gibo {

/// Noisy zeroth-order oracle: one evaluation of the objective at a parameter
/// vector. Shared by every optimizer and benchmark environment.
using Oracle = std::function<double(const Eigen::VectorXd&)>;

enum class RefitPolicy { fixed_params, map_each_iteration };

struct GiboConfig {
  double stepsize = 0.25;            // eta
  int samples_per_update = 1;        // M, acquisition-chosen queries per iteration
  int window_size = 2;               // N_m, local model uses the last N_m points
  double acquisition_bound = 0.2;    // delta_b, half-width of the query box
  bool normalize_gradient = true;
  int acquisition_restarts = 5;
  RefitPolicy refit = RefitPolicy::fixed_params;
  KernelParams params;               // initial (and, when fixed, permanent) kernel
  HyperPriors hyperpriors;           // used when refitting

  void validate() const;
};

struct EvalRecord {
  int index = 0;                 // 0-based evaluation counter
  Eigen::VectorXd point;         // queried parameters
  double observed = 0.0;         // noisy objective value
  Eigen::VectorXd iterate;       // current theta_t when the query was made
  double best_observed = 0.0;    // running max of observed values
  Eigen::VectorXd best_point;    // where the running max was observed
};

struct StepRecord {
  int iteration = 0;
  Eigen::VectorXd before;        // theta_t
  Eigen::VectorXd after;         // theta_{t+1}
  Eigen::VectorXd lengthscales;  // lengthscales in force at the update
  bool degenerate = false;       // gradient too small; no movement
};

/// Per-evaluation trace of a run; shared schema across optimizers so results
/// feed one comparison pipeline.
struct RunHistory {
  std::vector<EvalRecord> evals;
  std::vector<StepRecord> steps;
};

struct OptimizerState {
  Eigen::VectorXd iterate;
  Dataset data;
  int evaluations = 0;
  int iteration = 0;
  KernelParams params;
  RunHistory history;
};

/// Scales a gradient to unit Mahalanobis length under L = diag(1/l_i^2), so a
/// step of size eta moves a fixed fraction of a correlation length in every
/// direction. Returns nullopt when the norm is below 1e-12 (degenerate
/// gradient; the caller skips the update).
std::optional<Eigen::VectorXd> normalize_gradient(const Eigen::VectorXd& gradient,
                                                  const Eigen::VectorXd& lengthscales);

/// The most recent min(count, n) points of the dataset, original order kept.
Dataset select_local_window(const Dataset& data, int count);

/// One outer iteration: evaluate at theta_t, optionally refit hyperparameters
/// on the window, take `samples_per_update` acquisition-chosen queries, then
/// ascend the posterior-mean gradient. Consumes exactly M+1 oracle calls. If
/// the oracle throws, already-recorded evaluations are kept and the error
/// propagates with the iterate unchanged.
void gibo_iteration(OptimizerState& state, const Oracle& oracle, const GiboConfig& config,
                    SplitMix64& rng);

/// Runs iterations until the next one would exceed `budget` evaluations.
RunHistory run_gibo(const Oracle& oracle, const Eigen::VectorXd& theta0,
                    const GiboConfig& config, int budget, SplitMix64& rng);

}  // namespace gibo
