#include "gibo/hyperfit.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "gibo/ascent.hpp"
#include "gibo/errors.hpp"
#include "gibo/gp.hpp"

namespace gibo {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kScaleFloor = 1e-3;
}  // namespace

double PriorSpec::log_density(double x) const {
  if (kind == Kind::uniform) {
    return (x >= a && x <= b) ? 0.0 : -kInf;
  }
  const double z = (x - a) / b;
  return -0.5 * z * z;
}

double PriorSpec::mode() const { return kind == Kind::uniform ? 0.5 * (a + b) : a; }

double PriorSpec::search_lower() const {
  return kind == Kind::uniform ? std::max(a, 1e-8) : kScaleFloor;
}

double PriorSpec::search_upper() const {
  return kind == Kind::uniform ? b : a + 8.0 * b;
}

double PriorSpec::sample(SplitMix64& rng) const {
  if (kind == Kind::uniform) return uniform_in(rng, a, b);
  const double draw = a + b * normal_double(rng);
  return std::min(std::max(draw, search_lower()), search_upper());
}

double map_objective(const Dataset& data, const KernelParams& params,
                     const HyperPriors& priors) {
  double obj;
  try {
    obj = log_marginal_likelihood(data, params);
  } catch (const ConditioningError&) {
    return -kInf;
  }
  for (int i = 0; i < params.dim(); ++i) {
    obj += priors.lengthscale.log_density(params.lengthscales[i]);
  }
  if (!priors.fixed_signal_std) {
    obj += priors.signal_std.log_density(std::sqrt(params.signal_variance));
  }
  return obj;
}

namespace {

/// Layout of the free (searched) parameters in log space.
struct FitLayout {
  int dim = 0;               // input dimension d
  int lengthscale_count = 0; // 1 (isotropic) or d (ard)
  bool fit_signal = false;
  int size() const { return lengthscale_count + (fit_signal ? 1 : 0); }
};

KernelParams decode(const Eigen::VectorXd& phi, const FitLayout& layout,
                    const HyperPriors& priors) {
  KernelParams p;
  p.lengthscales.resize(layout.dim);
  for (int i = 0; i < layout.dim; ++i) {
    const int j = layout.lengthscale_count == 1 ? 0 : i;
    p.lengthscales[i] = std::exp(phi[j]);
  }
  const double signal_std = layout.fit_signal
                                ? std::exp(phi[layout.lengthscale_count])
                                : *priors.fixed_signal_std;
  p.signal_variance = signal_std * signal_std;
  const double noise_std = priors.fixed_noise_std.value_or(0.0);
  p.noise_variance = noise_std * noise_std;
  return p;
}

Eigen::VectorXd encode(const KernelParams& params, const FitLayout& layout) {
  Eigen::VectorXd phi(layout.size());
  for (int j = 0; j < layout.lengthscale_count; ++j) {
    phi[j] = std::log(params.lengthscales[j]);
  }
  if (layout.fit_signal) {
    phi[layout.lengthscale_count] = 0.5 * std::log(params.signal_variance);
  }
  return phi;
}

}  // namespace

KernelParams fit_hyperparameters_map(const Dataset& data, int dim,
                                     const HyperPriors& priors,
                                     const MapFitOptions& options) {
  if (data.size() < 2) {
    throw std::invalid_argument("fit_hyperparameters_map: need at least 2 points");
  }
  if (data.dim() != dim) {
    throw std::invalid_argument("fit_hyperparameters_map: dimension mismatch");
  }
  if (!priors.fixed_noise_std) {
    throw std::invalid_argument(
        "fit_hyperparameters_map: the likelihood noise must be frozen");
  }
  FitLayout layout;
  layout.dim = dim;
  layout.lengthscale_count = priors.ard ? dim : 1;
  layout.fit_signal = !priors.fixed_signal_std.has_value();

  const int m = layout.size();
  Eigen::VectorXd lower(m), upper(m);
  for (int j = 0; j < layout.lengthscale_count; ++j) {
    lower[j] = std::log(priors.lengthscale.search_lower());
    upper[j] = std::log(priors.lengthscale.search_upper());
  }
  if (layout.fit_signal) {
    lower[layout.lengthscale_count] = std::log(priors.signal_std.search_lower());
    upper[layout.lengthscale_count] = std::log(priors.signal_std.search_upper());
  }

  // The MAP is taken with respect to the original (non-log) parameters; the
  // log coordinates only reparameterize the search, so no Jacobian term.
  auto objective = [&](const Eigen::VectorXd& phi) {
    return map_objective(data, decode(phi, layout, priors), priors);
  };

  std::vector<Eigen::VectorXd> starts;
  {
    KernelParams mode_params;
    mode_params.lengthscales = Eigen::VectorXd::Constant(dim, priors.lengthscale.mode());
    const double s = priors.fixed_signal_std.value_or(priors.signal_std.mode());
    mode_params.signal_variance = s * s;
    starts.push_back(encode(mode_params, layout));
  }
  if (options.warm_start) starts.push_back(encode(*options.warm_start, layout));
  SplitMix64 rng(options.seed);
  while (static_cast<int>(starts.size()) < std::max(1, options.starts)) {
    Eigen::VectorXd phi(m);
    for (int j = 0; j < layout.lengthscale_count; ++j) {
      phi[j] = std::log(priors.lengthscale.sample(rng));
    }
    if (layout.fit_signal) {
      phi[layout.lengthscale_count] = std::log(priors.signal_std.sample(rng));
    }
    starts.push_back(phi);
  }

  AscentOptions ascent;
  ascent.max_iterations = options.max_iterations;
  ascent.step_tolerance = 1e-6;
  ascent.fd_step = 1e-5;

  double best_value = -kInf;
  Eigen::VectorXd best_phi;
  for (const auto& start : starts) {
    const AscentResult res = bounded_maximize(objective, start, lower, upper, ascent);
    if (std::isfinite(res.value) && res.value > best_value) {
      best_value = res.value;
      best_phi = res.point;
    }
  }
  if (!std::isfinite(best_value)) {
    throw FittingError("fit_hyperparameters_map: no start produced a finite objective");
  }
  return decode(best_phi, layout, priors);
}

}  // namespace gibo
