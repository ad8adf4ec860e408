#include "gibo/gibo.hpp"

#include <cmath>
#include <stdexcept>

#include "gibo/acquisition.hpp"
#include "gibo/gp.hpp"

namespace gibo {

void GiboConfig::validate() const {
  if (!(stepsize > 0.0)) throw std::invalid_argument("GiboConfig: stepsize must be > 0");
  if (samples_per_update < 1) {
    throw std::invalid_argument("GiboConfig: samples_per_update must be >= 1");
  }
  if (window_size < samples_per_update + 1) {
    throw std::invalid_argument("GiboConfig: window_size must be >= M + 1");
  }
  if (!(acquisition_bound > 0.0)) {
    throw std::invalid_argument("GiboConfig: acquisition_bound must be > 0");
  }
  if (acquisition_restarts < 1) {
    throw std::invalid_argument("GiboConfig: acquisition_restarts must be >= 1");
  }
  params.validate();
}

std::optional<Eigen::VectorXd> normalize_gradient(const Eigen::VectorXd& gradient,
                                                  const Eigen::VectorXd& lengthscales) {
  if (gradient.size() != lengthscales.size()) {
    throw std::invalid_argument("normalize_gradient: dimension mismatch");
  }
  const double norm =
      std::sqrt((gradient.array() / lengthscales.array()).square().sum());
  if (norm < 1e-12) return std::nullopt;
  return Eigen::VectorXd(gradient / norm);
}

Dataset select_local_window(const Dataset& data, int count) {
  return data.tail(count);
}

namespace {

void record_evaluation(OptimizerState& state, const Eigen::VectorXd& point, double y) {
  state.data.append(point, y);
  EvalRecord rec;
  rec.index = state.evaluations;
  rec.point = point;
  rec.observed = y;
  rec.iterate = state.iterate;
  if (state.history.evals.empty() || y > state.history.evals.back().best_observed) {
    rec.best_observed = y;
    rec.best_point = point;
  } else {
    rec.best_observed = state.history.evals.back().best_observed;
    rec.best_point = state.history.evals.back().best_point;
  }
  state.history.evals.push_back(std::move(rec));
  ++state.evaluations;
}

}  // namespace

void gibo_iteration(OptimizerState& state, const Oracle& oracle, const GiboConfig& config,
                    SplitMix64& rng) {
  config.validate();
  record_evaluation(state, state.iterate, oracle(state.iterate));

  if (config.refit == RefitPolicy::map_each_iteration && state.data.size() >= 2) {
    MapFitOptions options;
    options.warm_start = state.params;
    options.seed = derive_seed(0x9175u, {static_cast<std::uint64_t>(state.iteration)});
    // Fresh multistarts matter most before the model has settled; afterwards
    // the warm start carries the previous fit. The first fit happens at
    // iteration 1 since a single point cannot be fitted.
    options.starts = state.iteration <= 1 ? 8 : 4;
    const Dataset window = select_local_window(state.data, config.window_size);
    state.params = fit_hyperparameters_map(window, static_cast<int>(state.iterate.size()),
                                           config.hyperpriors, options);
  }

  for (int m = 0; m < config.samples_per_update; ++m) {
    const Dataset window = select_local_window(state.data, config.window_size);
    GIContext ctx(state.iterate, window, state.params, config.acquisition_bound);
    const Eigen::VectorXd query = maximize_gi(ctx, config.acquisition_restarts, rng);
    record_evaluation(state, query, oracle(query));
  }

  const Dataset window = select_local_window(state.data, config.window_size);
  const JacobianPosterior belief = posterior_jacobian(state.iterate, window, state.params);

  StepRecord step;
  step.iteration = state.iteration;
  step.before = state.iterate;
  step.lengthscales = state.params.lengthscales;
  Eigen::VectorXd direction;
  if (config.normalize_gradient) {
    const auto normalized = normalize_gradient(belief.mean, state.params.lengthscales);
    if (normalized) {
      direction = *normalized;
    } else {
      step.degenerate = true;
      direction = Eigen::VectorXd::Zero(state.iterate.size());
    }
  } else {
    direction = belief.mean;
    if (direction.lpNorm<Eigen::Infinity>() < 1e-15) step.degenerate = true;
  }
  state.iterate += config.stepsize * direction;
  step.after = state.iterate;
  state.history.steps.push_back(std::move(step));
  ++state.iteration;
}

RunHistory run_gibo(const Oracle& oracle, const Eigen::VectorXd& theta0,
                    const GiboConfig& config, int budget, SplitMix64& rng) {
  config.validate();
  if (budget < config.samples_per_update + 1) {
    throw std::invalid_argument("run_gibo: budget below one iteration");
  }
  OptimizerState state;
  state.iterate = theta0;
  state.params = config.params;
  while (state.evaluations + config.samples_per_update + 1 <= budget) {
    gibo_iteration(state, oracle, config, rng);
  }
  return std::move(state.history);
}

}  // namespace gibo
