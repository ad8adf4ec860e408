#include "gibo/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <json.hpp>
#include <stdexcept>

#include "gibo/chol.hpp"
#include "gibo/errors.hpp"
#include "gibo/gp.hpp"
#include "gibo/sobol.hpp"

namespace gibo {

namespace {

/// Upper bound on hypercube line picking before rescaling.
double distance_upper_bound(double d) {
  return std::sqrt(d / 6.0) *
         std::sqrt(1.0 / 3.0 + 1.0 + 2.0 * std::sqrt(1.0 - 3.0 / (5.0 * d)));
}

constexpr double kLengthscaleNoise = 0.3;  // gamma
constexpr double kEvaluationNoiseStd = 0.1;

}  // namespace

double delta_sub(int d) {
  if (d < 1) throw std::invalid_argument("delta_sub: dimension must be >= 1");
  return 0.1 / distance_upper_bound(2.0) * distance_upper_bound(static_cast<double>(d));
}

double sample_lengthscale(int d, SplitMix64& rng) {
  const double center = 2.0 * delta_sub(d);
  return uniform_in(rng, center * (1.0 - kLengthscaleNoise),
                    center * (1.0 + kLengthscaleNoise));
}

double SyntheticObjective::mean(const Eigen::VectorXd& x) const {
  if (x.size() != dim) throw std::invalid_argument("SyntheticObjective: bad query dim");
  const double inv_two_l2 = 0.5 / (lengthscale * lengthscale);
  double acc = 0.0;
  for (int j = 0; j < support.cols(); ++j) {
    const double q = (x - support.col(j)).squaredNorm();
    acc += weights[j] * std::exp(-q * inv_two_l2);
  }
  return signal_variance * acc;
}

Eigen::VectorXd SyntheticObjective::gradient(const Eigen::VectorXd& x) const {
  if (x.size() != dim) throw std::invalid_argument("SyntheticObjective: bad query dim");
  const double inv_l2 = 1.0 / (lengthscale * lengthscale);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(dim);
  for (int j = 0; j < support.cols(); ++j) {
    const Eigen::VectorXd diff = x - support.col(j);
    const double k = std::exp(-0.5 * diff.squaredNorm() * inv_l2);
    g -= weights[j] * k * inv_l2 * diff;
  }
  return signal_variance * g;
}

KernelParams SyntheticObjective::params() const {
  return KernelParams::isotropic(dim, lengthscale, signal_variance,
                                 noise_std * noise_std);
}

SyntheticObjective generate_objective(int d, std::uint64_t seed) {
  if (d < 1 || d > kSobolMaxDim) {
    throw std::invalid_argument("generate_objective: dimension out of range");
  }
  SyntheticObjective obj;
  obj.dim = d;
  obj.seed = seed;
  obj.signal_variance = 1.0;
  obj.noise_std = kEvaluationNoiseStd;

  SplitMix64 rng(seed);
  obj.lengthscale = sample_lengthscale(d, rng);

  const int n = kSupportPoints;
  obj.support = sobol_points(n, d).transpose();  // d x n

  const KernelParams kernel =
      KernelParams::isotropic(d, obj.lengthscale, obj.signal_variance, 0.0);
  Eigen::MatrixXd gram(n, n);
  const double jitter = effective_noise(kernel);
  for (int i = 0; i < n; ++i) {
    gram(i, i) = obj.signal_variance + jitter;
    for (int j = i + 1; j < n; ++j) {
      gram(i, j) = gram(j, i) = se_kernel(obj.support.col(i), obj.support.col(j), kernel);
    }
  }
  CholeskyFactor factor;
  try {
    factor = cholesky_factorize(gram);
  } catch (const ConditioningError&) {
    throw std::runtime_error("generate_objective: support kernel matrix degenerate");
  }

  // Joint prior sample f = L z, interpolation weights alpha = L^{-T} z (one
  // exact triangular solve), and support values taken as the surface's own
  // values K alpha so the stored pairs interpolate exactly.
  const Eigen::VectorXd z = normal_vector(rng, n);
  obj.weights = factor.L.triangularView<Eigen::Lower>().adjoint().solve(z);
  gram.diagonal().array() -= jitter;
  obj.values = gram * obj.weights;

  const GlobalMax max = approx_global_max(obj);
  obj.max_point = max.point;
  obj.max_value = max.value;
  obj.max_converged = max.converged;
  return obj;
}

namespace {

/// Deterministic gradient ascent with a backtracking step, stopping when the
/// step drops below tolerance or the iteration cap is reached.
GlobalMax ascend_surface(const SyntheticObjective& objective, Eigen::VectorXd x) {
  constexpr int kMaxIterations = 10000;
  constexpr double kStepTolerance = 1e-8;
  double fx = objective.mean(x);
  double step = objective.lengthscale;
  GlobalMax out;
  out.converged = false;
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    const Eigen::VectorXd g = objective.gradient(x);
    const double gnorm = g.norm();
    if (gnorm * step < kStepTolerance) {
      out.converged = true;
      break;
    }
    bool accepted = false;
    while (step * gnorm >= kStepTolerance) {
      const Eigen::VectorXd candidate = x + step * g;
      const double fc = objective.mean(candidate);
      if (fc > fx) {
        x = candidate;
        fx = fc;
        accepted = true;
        step *= 1.3;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      out.converged = true;
      break;
    }
  }
  out.point = std::move(x);
  out.value = fx;
  return out;
}

}  // namespace

GlobalMax approx_global_max(const SyntheticObjective& objective) {
  // Ascend from the best support values, not just the single best: near-tied
  // basins and peaks just beyond the support hull are otherwise missed.
  constexpr int kStarts = 32;
  const int n = static_cast<int>(objective.values.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return objective.values[a] > objective.values[b]; });

  GlobalMax best;
  best.value = -std::numeric_limits<double>::infinity();
  for (int s = 0; s < std::min(kStarts, n); ++s) {
    GlobalMax run = ascend_surface(objective, objective.support.col(order[s]));
    if (run.value > best.value) best = std::move(run);
  }
  return best;
}

double evaluate_noisy(const SyntheticObjective& objective, const Eigen::VectorXd& x,
                      SplitMix64& rng) {
  return objective.mean(x) + objective.noise_std * normal_double(rng);
}

std::vector<double> normalized_regret(const SyntheticObjective& objective,
                                      const RunHistory& history,
                                      bool select_by_observed) {
  if (history.evals.empty()) {
    throw std::invalid_argument("normalized_regret: empty history");
  }
  const Eigen::VectorXd x0 = Eigen::VectorXd::Constant(objective.dim, 0.5);
  const double denom = objective.max_value - objective.mean(x0);
  if (!(std::abs(denom) > 1e-12)) {
    throw std::runtime_error("normalized_regret: degenerate normalization");
  }
  std::vector<double> regret;
  regret.reserve(history.evals.size());
  double best_key = -std::numeric_limits<double>::infinity();
  double best_true = 0.0;
  for (const EvalRecord& rec : history.evals) {
    const double true_value = objective.mean(rec.point);
    const double key = select_by_observed ? rec.observed : true_value;
    if (key > best_key) {
      best_key = key;
      best_true = true_value;
    }
    regret.push_back((objective.max_value - best_true) / denom);
  }
  return regret;
}

void save_objective(const SyntheticObjective& objective, const std::string& path) {
  nlohmann::json j;
  j["kind"] = "synthetic-objective";
  j["dim"] = objective.dim;
  j["seed"] = objective.seed;
  j["lengthscale"] = objective.lengthscale;
  j["signal_variance"] = objective.signal_variance;
  j["noise_std"] = objective.noise_std;
  j["support"] = std::vector<std::vector<double>>();
  for (int i = 0; i < objective.support.cols(); ++i) {
    std::vector<double> col(objective.support.rows());
    for (int r = 0; r < objective.support.rows(); ++r) col[r] = objective.support(r, i);
    j["support"].push_back(col);
  }
  j["values"] = std::vector<double>(objective.values.begin(), objective.values.end());
  j["weights"] = std::vector<double>(objective.weights.begin(), objective.weights.end());
  j["max_point"] =
      std::vector<double>(objective.max_point.begin(), objective.max_point.end());
  j["max_value"] = objective.max_value;
  j["max_converged"] = objective.max_converged;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_objective: cannot open " + path);
  out << j.dump(2) << "\n";
}

SyntheticObjective load_objective(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_objective: cannot open " + path);
  nlohmann::json j;
  in >> j;
  if (j.value("kind", "") != "synthetic-objective") {
    throw ParseError("load_objective: not a synthetic objective file");
  }
  SyntheticObjective obj;
  obj.dim = j.at("dim").get<int>();
  obj.seed = j.at("seed").get<std::uint64_t>();
  obj.lengthscale = j.at("lengthscale").get<double>();
  obj.signal_variance = j.at("signal_variance").get<double>();
  obj.noise_std = j.at("noise_std").get<double>();
  const auto& support = j.at("support");
  const int n = static_cast<int>(support.size());
  obj.support.resize(obj.dim, n);
  for (int i = 0; i < n; ++i) {
    const auto col = support.at(i).get<std::vector<double>>();
    for (int r = 0; r < obj.dim; ++r) obj.support(r, i) = col.at(r);
  }
  const auto values = j.at("values").get<std::vector<double>>();
  obj.values = Eigen::Map<const Eigen::VectorXd>(values.data(), values.size());
  const auto weights = j.at("weights").get<std::vector<double>>();
  obj.weights = Eigen::Map<const Eigen::VectorXd>(weights.data(), weights.size());
  const auto max_point = j.at("max_point").get<std::vector<double>>();
  obj.max_point = Eigen::Map<const Eigen::VectorXd>(max_point.data(), max_point.size());
  obj.max_value = j.at("max_value").get<double>();
  obj.max_converged = j.at("max_converged").get<bool>();
  return obj;
}

}  // namespace gibo
