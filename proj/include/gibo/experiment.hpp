#pragma once

#include <cstdint>
#include <functional>
#include <json.hpp>
#include <string>
#include <vector>

#include "gibo/gibo.hpp"

namespace gibo {

enum class ExperimentKind { synthetic_within, synthetic_out, lqr };

std::string to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(const std::string& name);

/// One optimizer entry: a known name plus hyperparameter overrides; anything
/// not overridden takes the benchmark defaults for the experiment kind and
/// dimension.
struct OptimizerSpec {
  std::string name;             // "gibo" | "ars" | "vanilla-bo"
  nlohmann::json overrides;     // flat key -> value map
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::synthetic_within;
  std::vector<int> dimensions;  // synthetic kinds only; lqr fixes the instance
  int trials = 1;
  long long budget = 300;       // evaluations (synthetic) or timesteps (lqr)
  std::vector<OptimizerSpec> optimizers;
  std::uint64_t master_seed = 0;
  std::string output_dir = ".";
  int workers = 1;
  bool save_objectives = false;

  /// Parses and validates; ConfigError messages carry the offending field path.
  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig from_file(const std::string& path);
  void validate() const;
};

/// One CSV row per oracle evaluation. `index` counts evaluations (synthetic)
/// or timesteps consumed (lqr); `metric` is the normalized regret or the
/// relative cost error; `stable` is empty for synthetic rows.
struct ResultRow {
  std::string experiment;
  std::string optimizer;
  int dimension = 0;
  int trial = 0;
  long long index = 0;
  double observed = 0.0;
  double best_observed = 0.0;
  double metric = 0.0;
  int stable = -1;  // -1: not applicable, else 0/1

  static const char* csv_header();
  std::string to_csv() const;
};

struct TrialContext {
  ExperimentKind kind;
  int dimension = 0;
  int trial = 0;
  std::string optimizer;
};

/// Optional per-trial hook, invoked in deterministic output order after all
/// trials finish; used by verification harnesses to inspect run internals.
using TrialObserver =
    std::function<void(const TrialContext&, const RunHistory&)>;

struct ExperimentResult {
  std::string rows_path;
  std::string summary_path;
  int failed_trials = 0;
  /// 0 on success, 3 when some trials failed and were skipped.
  int exit_code() const { return failed_trials == 0 ? 0 : 3; }
};

/// Runs every (dimension, trial, optimizer) cell to budget, writes one rows
/// CSV and one summary CSV into the output directory. Fully deterministic for
/// a fixed master seed regardless of the worker count. Per-trial failures are
/// recorded and skipped.
ExperimentResult run_experiment(const ExperimentConfig& config,
                                const TrialObserver& observer = {});

/// Aggregates a rows CSV into per-evaluation-index curves: mean, median,
/// sample standard deviation, and the 2nd and 98th percentiles of the metric
/// per (optimizer, dimension). Throws ParseError with a line number on
/// malformed input.
void export_curves(const std::string& rows_path, const std::string& out_path);

/// Linear-interpolation percentile of a sample (q in [0, 100]); the helper
/// behind the exported bands, exposed for tests.
double percentile(std::vector<double> values, double q);

}  // namespace gibo
