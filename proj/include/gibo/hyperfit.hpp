#pragma once

#include <optional>

#include "gibo/dataset.hpp"
#include "gibo/kernel.hpp"
#include "gibo/rng.hpp"

namespace gibo {

/// One-dimensional hyperprior: uniform on [a, b] or normal with mean a and
/// standard deviation b.
struct PriorSpec {
  enum class Kind { uniform, normal };

  Kind kind = Kind::uniform;
  double a = 0.0;
  double b = 1.0;

  static PriorSpec uniform(double lo, double hi) {
    return {Kind::uniform, lo, hi};
  }
  static PriorSpec normal(double mean, double stddev) {
    return {Kind::normal, mean, stddev};
  }

  /// Log density up to an additive constant; -inf outside a uniform's support.
  double log_density(double x) const;
  /// Mode used as the deterministic first start (uniform: interval midpoint).
  double mode() const;
  /// Search box for the MAP ascent; normal priors are truncated below at 1e-3.
  double search_lower() const;
  double search_upper() const;
  double sample(SplitMix64& rng) const;
};

/// Priors and frozen values for MAP estimation. The lengthscale prior is
/// shared across dimensions; with `ard` set, each dimension gets its own
/// fitted lengthscale, otherwise a single isotropic one.
struct HyperPriors {
  PriorSpec lengthscale = PriorSpec::uniform(1e-2, 1e1);
  PriorSpec signal_std = PriorSpec::uniform(1e-3, 1e2);
  std::optional<double> fixed_noise_std;
  std::optional<double> fixed_signal_std;
  bool ard = false;
};

struct MapFitOptions {
  int starts = 8;
  int max_iterations = 200;
  std::uint64_t seed = 0x5eedf17u;
  /// Optional warm start added to the start list (e.g. the previous fit).
  std::optional<KernelParams> warm_start;
};

/// Maximum a posteriori kernel hyperparameters: deterministic multistart BFGS
/// ascent of log marginal likelihood + log prior, searched in log-parameter
/// space. Frozen parameters are returned unchanged. Throws FittingError when
/// no start yields a finite objective.
KernelParams fit_hyperparameters_map(const Dataset& data, int dim,
                                     const HyperPriors& priors,
                                     const MapFitOptions& options = {});

/// The posterior objective used by the fit; exposed for tests.
double map_objective(const Dataset& data, const KernelParams& params,
                     const HyperPriors& priors);

}  // namespace gibo
