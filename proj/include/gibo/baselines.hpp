#pragma once

#include <Eigen/Core>
#include <optional>
#include <utility>
#include <vector>

#include "gibo/gibo.hpp"
#include "gibo/hyperfit.hpp"
#include "gibo/kernel.hpp"
#include "gibo/rng.hpp"

namespace gibo {

/// Augmented random search, V1-t flavor: antithetic Gaussian perturbations,
/// update scaled by the standard deviation of the used returns, optional
/// top-b elitism.
struct ArsConfig {
  double stepsize = 0.02;       // alpha
  double perturbation = 0.02;   // nu
  int directions = 1;           // N_dir perturbation directions per update
  int elite = 0;                // b; 0 keeps all directions
  bool state_normalization = false;

  int elite_count() const { return elite > 0 ? elite : directions; }
  void validate() const;
};

struct ArsUpdate {
  Eigen::VectorXd next;
  std::vector<std::pair<Eigen::VectorXd, double>> evaluations;  // in query order
};

/// One ARS update from theta: evaluates J(theta +- nu * delta_k) for N_dir
/// Gaussian directions (2 N_dir oracle calls), keeps the b directions with the
/// largest max(y+, y-), and steps by
///   alpha / (b * sigma_R) * sum (y+_k - y-_k) delta_k
/// where sigma_R is the standard deviation of the 2b used returns, floored at
/// 1e-8.
ArsUpdate ars_update(const Eigen::VectorXd& theta, const Oracle& oracle,
                     const ArsConfig& config, SplitMix64& rng);

/// Loops ars_update until the next update would exceed the budget.
RunHistory run_ars(const Oracle& oracle, const Eigen::VectorXd& theta0, int budget,
                   const ArsConfig& config, SplitMix64& rng);

/// Expected improvement under a Gaussian belief (maximization convention):
///   (mu - best - xi) Phi(z) + sigma phi(z),  z = (mu - best - xi) / sigma,
/// and max(mu - best - xi, 0) in the zero-variance limit. Non-negative.
double expected_improvement(double mean, double stddev, double best, double xi);

struct EiConfig {
  double xi = 0.0;     // exploration offset
  int restarts = 5;    // EI maximization multistarts
  int refit_every = 5; // MAP refit cadence in evaluations (when priors given)
};

/// Plain Bayesian optimization with expected improvement over the box
/// [lower, upper]: condition the GP on all data, maximize EI by seeded
/// multistart, query, repeat. The first query evaluates theta0. When
/// `hyperpriors` is set, hyperparameters are refit by MAP every
/// `refit_every` evaluations.
RunHistory run_vanilla_bo(const Oracle& oracle, const Eigen::VectorXd& theta0,
                          const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                          int budget, const KernelParams& params,
                          const std::optional<HyperPriors>& hyperpriors,
                          const EiConfig& config, SplitMix64& rng);

}  // namespace gibo
