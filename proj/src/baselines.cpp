#include "gibo/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "gibo/ascent.hpp"
#include "gibo/gp.hpp"

namespace gibo {

void ArsConfig::validate() const {
  if (!(stepsize > 0.0)) throw std::invalid_argument("ArsConfig: stepsize must be > 0");
  if (!(perturbation > 0.0)) {
    throw std::invalid_argument("ArsConfig: perturbation must be > 0");
  }
  if (directions < 1) throw std::invalid_argument("ArsConfig: directions must be >= 1");
  if (elite < 0 || elite > directions) {
    throw std::invalid_argument("ArsConfig: elite must lie in [0, directions]");
  }
}

ArsUpdate ars_update(const Eigen::VectorXd& theta, const Oracle& oracle,
                     const ArsConfig& config, SplitMix64& rng) {
  config.validate();
  const int n_dir = config.directions;
  const Eigen::Index d = theta.size();

  std::vector<Eigen::VectorXd> deltas(n_dir);
  for (int k = 0; k < n_dir; ++k) deltas[k] = normal_vector(rng, d);

  ArsUpdate out;
  out.evaluations.reserve(2 * n_dir);
  Eigen::VectorXd y_plus(n_dir), y_minus(n_dir);
  for (int k = 0; k < n_dir; ++k) {
    const Eigen::VectorXd p = theta + config.perturbation * deltas[k];
    y_plus[k] = oracle(p);
    out.evaluations.emplace_back(p, y_plus[k]);
    const Eigen::VectorXd m = theta - config.perturbation * deltas[k];
    y_minus[k] = oracle(m);
    out.evaluations.emplace_back(m, y_minus[k]);
  }

  const int b = config.elite_count();
  std::vector<int> order(n_dir);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
    return std::max(y_plus[i], y_minus[i]) > std::max(y_plus[j], y_minus[j]);
  });
  order.resize(b);

  // Standard deviation over the 2b used returns (population convention).
  double sum = 0.0, sq_sum = 0.0;
  for (int k : order) {
    sum += y_plus[k] + y_minus[k];
    sq_sum += y_plus[k] * y_plus[k] + y_minus[k] * y_minus[k];
  }
  const double mean = sum / (2.0 * b);
  const double variance = std::max(0.0, sq_sum / (2.0 * b) - mean * mean);
  const double sigma_r = std::max(std::sqrt(variance), 1e-8);

  Eigen::VectorXd step = Eigen::VectorXd::Zero(d);
  for (int k : order) step += (y_plus[k] - y_minus[k]) * deltas[k];
  out.next = theta + (config.stepsize / (b * sigma_r)) * step;
  return out;
}

namespace {

void record(RunHistory& history, const Eigen::VectorXd& point, double y,
            const Eigen::VectorXd& iterate) {
  EvalRecord rec;
  rec.index = static_cast<int>(history.evals.size());
  rec.point = point;
  rec.observed = y;
  rec.iterate = iterate;
  if (history.evals.empty() || y > history.evals.back().best_observed) {
    rec.best_observed = y;
    rec.best_point = point;
  } else {
    rec.best_observed = history.evals.back().best_observed;
    rec.best_point = history.evals.back().best_point;
  }
  history.evals.push_back(std::move(rec));
}

}  // namespace

RunHistory run_ars(const Oracle& oracle, const Eigen::VectorXd& theta0, int budget,
                   const ArsConfig& config, SplitMix64& rng) {
  config.validate();
  RunHistory history;
  Eigen::VectorXd theta = theta0;
  const int per_update = 2 * config.directions;
  int used = 0;
  while (used + per_update <= budget) {
    ArsUpdate update = ars_update(theta, oracle, config, rng);
    for (const auto& [point, y] : update.evaluations) record(history, point, y, theta);
    StepRecord step;
    step.iteration = static_cast<int>(history.steps.size());
    step.before = theta;
    step.after = update.next;
    step.degenerate = (update.next - theta).lpNorm<Eigen::Infinity>() == 0.0;
    history.steps.push_back(std::move(step));
    theta = update.next;
    used += per_update;
  }
  return history;
}

double expected_improvement(double mean, double stddev, double best, double xi) {
  if (stddev < 0.0) throw std::invalid_argument("expected_improvement: stddev < 0");
  const double gap = mean - best - xi;
  if (stddev == 0.0) return std::max(gap, 0.0);
  const double z = gap / stddev;
  const double pdf = std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI);
  const double cdf = 0.5 * std::erfc(-z / std::sqrt(2.0));
  return std::max(0.0, gap * cdf + stddev * pdf);
}

RunHistory run_vanilla_bo(const Oracle& oracle, const Eigen::VectorXd& theta0,
                          const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                          int budget, const KernelParams& params,
                          const std::optional<HyperPriors>& hyperpriors,
                          const EiConfig& config, SplitMix64& rng) {
  if (budget < 1) throw std::invalid_argument("run_vanilla_bo: budget must be >= 1");
  const Eigen::Index d = theta0.size();

  RunHistory history;
  Dataset data;
  KernelParams model = params;

  auto evaluate = [&](const Eigen::VectorXd& point) {
    const double y = oracle(point);
    data.append(point, y);
    record(history, point, y, point);
  };

  AscentOptions ascent;
  ascent.max_iterations = 100;
  ascent.step_tolerance = 1e-7;
  ascent.fd_step = 1e-7;

  while (data.size() < budget) {
    if (hyperpriors && data.size() >= 2 && data.size() % config.refit_every == 0) {
      MapFitOptions fit;
      fit.warm_start = model;
      fit.seed = derive_seed(0xb0u, {static_cast<std::uint64_t>(data.size())});
      model = fit_hyperparameters_map(data, static_cast<int>(d), *hyperpriors, fit);
    }
    const GpPosterior posterior(data, model);
    // With no data yet EI is constant over the box and the incumbent is moot;
    // the first-found start wins the tie deterministically.
    const double best = data.empty() ? 0.0 : history.evals.back().best_observed;
    auto ei = [&](const Eigen::VectorXd& x) {
      const ValuePosterior v = posterior.value(x);
      return expected_improvement(v.mean, std::sqrt(std::max(0.0, v.variance)), best,
                                  config.xi);
    };
    Eigen::VectorXd best_point;
    double best_value = -std::numeric_limits<double>::infinity();
    for (int r = 0; r < std::max(1, config.restarts); ++r) {
      Eigen::VectorXd start(d);
      for (Eigen::Index i = 0; i < d; ++i) start[i] = uniform_in(rng, lower[i], upper[i]);
      const AscentResult res = bounded_maximize(ei, start, lower, upper, ascent);
      if (res.value > best_value) {
        best_value = res.value;
        best_point = res.point;
      }
    }
    evaluate(best_point);
  }
  return history;
}

}  // namespace gibo
