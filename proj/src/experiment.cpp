#include "gibo/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include "gibo/baselines.hpp"
#include "gibo/errors.hpp"
#include "gibo/lqr.hpp"
#include "gibo/sobol.hpp"
#include "gibo/synthetic.hpp"

namespace gibo {

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double sample_std(const std::vector<double>& values) {
  const size_t n = values.size();
  if (n < 2) return 0.0;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);
  double acc = 0.0;
  for (double v : values) acc += (v - mean) * (v - mean);
  return std::sqrt(acc / static_cast<double>(n - 1));
}

double sample_mean(const std::vector<double>& values) {
  double mean = 0.0;
  for (double v : values) mean += v;
  return values.empty() ? 0.0 : mean / static_cast<double>(values.size());
}

}  // namespace

double percentile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("percentile: empty sample");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * q / 100.0;
  const auto lo = static_cast<size_t>(std::floor(h));
  if (lo + 1 >= values.size()) return values.back();
  const double frac = h - std::floor(h);
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::synthetic_within: return "synthetic-within";
    case ExperimentKind::synthetic_out: return "synthetic-out";
    case ExperimentKind::lqr: return "lqr";
  }
  return "unknown";
}

ExperimentKind experiment_kind_from_string(const std::string& name) {
  if (name == "synthetic-within") return ExperimentKind::synthetic_within;
  if (name == "synthetic-out") return ExperimentKind::synthetic_out;
  if (name == "lqr") return ExperimentKind::lqr;
  throw ConfigError("experiment: unknown kind '" + name + "'");
}

const char* ResultRow::csv_header() {
  return "experiment,optimizer,dimension,trial,index,observed_y,best_y,metric,stable";
}

std::string ResultRow::to_csv() const {
  std::ostringstream out;
  out << experiment << ',' << optimizer << ',' << dimension << ',' << trial << ','
      << index << ',' << format_double(observed) << ',' << format_double(best_observed)
      << ',' << format_double(metric) << ',';
  if (stable >= 0) out << stable;
  return out.str();
}

namespace {

const nlohmann::json& require_field(const nlohmann::json& j, const std::string& key,
                                    const std::string& path) {
  if (!j.contains(key)) throw ConfigError(path + key + ": missing");
  return j.at(key);
}

template <typename T>
T typed_field(const nlohmann::json& j, const std::string& key, const std::string& path) {
  try {
    return require_field(j, key, path).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(path + key + ": wrong type");
  }
}

template <typename T>
T typed_or(const nlohmann::json& j, const std::string& key, const std::string& path,
           T fallback) {
  if (!j.contains(key)) return fallback;
  return typed_field<T>(j, key, path);
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  ExperimentConfig config;
  config.kind = experiment_kind_from_string(typed_field<std::string>(j, "experiment", ""));
  if (config.kind == ExperimentKind::lqr) {
    if (j.contains("dimensions")) {
      throw ConfigError("dimensions: not configurable for the lqr experiment");
    }
  } else {
    config.dimensions = typed_field<std::vector<int>>(j, "dimensions", "");
  }
  config.trials = typed_field<int>(j, "trials", "");
  config.budget = typed_field<long long>(j, "budget", "");
  config.master_seed = typed_or<std::uint64_t>(j, "master_seed", "", 0);
  config.output_dir = typed_or<std::string>(j, "output_dir", "", ".");
  config.workers = typed_or<int>(j, "workers", "", 1);
  config.save_objectives = typed_or<bool>(j, "save_objectives", "", false);

  const auto& optimizers = require_field(j, "optimizers", "");
  if (!optimizers.is_array() || optimizers.empty()) {
    throw ConfigError("optimizers: must be a non-empty array");
  }
  for (size_t i = 0; i < optimizers.size(); ++i) {
    const std::string path = "optimizers[" + std::to_string(i) + "].";
    const auto& entry = optimizers.at(i);
    OptimizerSpec spec;
    spec.name = typed_field<std::string>(entry, "name", path);
    spec.overrides = entry;
    spec.overrides.erase("name");
    config.optimizers.push_back(std::move(spec));
  }
  config.validate();
  return config;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config file: cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config file: invalid JSON: ") + e.what());
  }
  return from_json(j);
}

void ExperimentConfig::validate() const {
  if (trials < 1) throw ConfigError("trials: must be >= 1");
  if (budget < 1) throw ConfigError("budget: must be >= 1");
  if (workers < 1) throw ConfigError("workers: must be >= 1");
  if (optimizers.empty()) throw ConfigError("optimizers: must be non-empty");
  if (kind != ExperimentKind::lqr) {
    if (dimensions.empty()) throw ConfigError("dimensions: must be non-empty");
    for (int d : dimensions) {
      if (d < 1 || d > kSobolMaxDim) {
        throw ConfigError("dimensions: entries must lie in [1, 36]");
      }
    }
  }
  for (size_t i = 0; i < optimizers.size(); ++i) {
    const std::string& name = optimizers[i].name;
    if (name != "gibo" && name != "ars" && name != "vanilla-bo") {
      throw ConfigError("optimizers[" + std::to_string(i) + "].name: unknown optimizer '" +
                        name + "'");
    }
    if (kind == ExperimentKind::lqr && name == "vanilla-bo") {
      throw ConfigError("optimizers[" + std::to_string(i) +
                        "]: vanilla-bo is not available for the lqr experiment");
    }
  }
}

namespace {

constexpr int kLqrTrajectoryLength = 300;

HyperPriors synthetic_out_priors(int d) {
  HyperPriors priors;
  const double center = 2.0 * delta_sub(d);
  priors.lengthscale = PriorSpec::uniform(center * 0.7, center * 1.3);
  priors.signal_std = PriorSpec::uniform(0.1, 5.0);
  priors.fixed_noise_std = 0.1;
  priors.ard = false;
  return priors;
}

HyperPriors lqr_priors() {
  HyperPriors priors;
  priors.lengthscale = PriorSpec::uniform(0.01, 0.3);
  priors.signal_std = PriorSpec::normal(20.0, 5.0);
  priors.fixed_noise_std = 2.0;
  priors.ard = true;
  return priors;
}

KernelParams prior_mode_params(int d, const HyperPriors& priors) {
  KernelParams params;
  params.lengthscales = Eigen::VectorXd::Constant(d, priors.lengthscale.mode());
  const double s = priors.fixed_signal_std.value_or(priors.signal_std.mode());
  params.signal_variance = s * s;
  const double noise = priors.fixed_noise_std.value_or(0.0);
  params.noise_variance = noise * noise;
  return params;
}

void reject_unknown_keys(const nlohmann::json& overrides,
                         const std::vector<std::string>& known,
                         const std::string& optimizer) {
  for (const auto& item : overrides.items()) {
    if (std::find(known.begin(), known.end(), item.key()) == known.end()) {
      throw ConfigError("optimizers." + optimizer + "." + item.key() +
                        ": unknown hyperparameter");
    }
  }
}

GiboConfig make_gibo_config(ExperimentKind kind, int d, const nlohmann::json& ov) {
  reject_unknown_keys(ov,
                      {"stepsize", "samples_per_update", "window_size",
                       "acquisition_bound", "normalize_gradient", "acquisition_restarts"},
                      "gibo");
  GiboConfig config;
  if (kind == ExperimentKind::lqr) {
    config.stepsize = 1.0;
    config.samples_per_update = 9;
    config.window_size = 40;
    config.acquisition_bound = 0.1;
    config.refit = RefitPolicy::map_each_iteration;
    config.hyperpriors = lqr_priors();
    config.params = prior_mode_params(d, config.hyperpriors);
  } else {
    config.stepsize = 0.25;
    config.samples_per_update = d;
    config.window_size = 5 * d;
    config.acquisition_bound = 0.2;
    if (kind == ExperimentKind::synthetic_out) {
      config.refit = RefitPolicy::map_each_iteration;
      config.hyperpriors = synthetic_out_priors(d);
      config.params = prior_mode_params(d, config.hyperpriors);
    } else {
      config.refit = RefitPolicy::fixed_params;
      // Within-model runs receive the generating parameters per trial.
      config.params = KernelParams::isotropic(d, 2.0 * delta_sub(d), 1.0, 0.01);
    }
  }
  config.normalize_gradient = true;
  config.acquisition_restarts = 5;

  config.stepsize = ov.value("stepsize", config.stepsize);
  config.samples_per_update = ov.value("samples_per_update", config.samples_per_update);
  config.window_size = ov.value("window_size", config.window_size);
  config.acquisition_bound = ov.value("acquisition_bound", config.acquisition_bound);
  config.normalize_gradient = ov.value("normalize_gradient", config.normalize_gradient);
  config.acquisition_restarts =
      ov.value("acquisition_restarts", config.acquisition_restarts);
  return config;
}

ArsConfig make_ars_config(ExperimentKind kind, int d, const nlohmann::json& ov) {
  reject_unknown_keys(ov, {"stepsize", "perturbation", "directions", "elite"}, "ars");
  ArsConfig config;
  if (kind == ExperimentKind::lqr) {
    config.stepsize = 0.01;
    config.perturbation = 0.025;
    config.directions = 8;
    config.elite = 4;
  } else {
    config.stepsize = 0.02;
    config.directions = 1 + d / 8;
    config.elite = 0;
    config.perturbation = kind == ExperimentKind::synthetic_within
                              ? 0.1 * 2.0 * delta_sub(d)
                              : 0.01;
  }
  config.stepsize = ov.value("stepsize", config.stepsize);
  config.perturbation = ov.value("perturbation", config.perturbation);
  config.directions = ov.value("directions", config.directions);
  config.elite = ov.value("elite", config.elite);
  return config;
}

EiConfig make_ei_config(const nlohmann::json& ov) {
  reject_unknown_keys(ov, {"xi", "restarts", "refit_every"}, "vanilla-bo");
  EiConfig config;
  config.xi = ov.value("xi", config.xi);
  config.restarts = ov.value("restarts", config.restarts);
  config.refit_every = ov.value("refit_every", config.refit_every);
  return config;
}

/// Smallest number of evaluations one optimizer update consumes.
int optimizer_unit(const std::string& name, ExperimentKind kind, int d,
                   const nlohmann::json& ov) {
  if (name == "gibo") return make_gibo_config(kind, d, ov).samples_per_update + 1;
  if (name == "ars") return 2 * make_ars_config(kind, d, ov).directions;
  return 1;
}

struct TaskOutput {
  std::vector<ResultRow> rows;
  std::vector<std::pair<TrialContext, RunHistory>> histories;
  std::vector<std::string> failures;
  std::map<std::string, double> seconds_by_optimizer;
};

/// Seed-stream tags; part of the reproducibility contract.
enum SeedTag : std::uint64_t {
  kTagObjective = 1,
  kTagNoise = 2,
  kTagOptimizer = 3,
};

RunHistory run_one_synthetic(const ExperimentConfig& config, const OptimizerSpec& spec,
                             const SyntheticObjective& objective, int d, int trial,
                             size_t opt_index) {
  SplitMix64 noise_rng(derive_seed(
      config.master_seed, {kTagNoise, static_cast<std::uint64_t>(d),
                           static_cast<std::uint64_t>(trial), opt_index}));
  SplitMix64 opt_rng(derive_seed(
      config.master_seed, {kTagOptimizer, static_cast<std::uint64_t>(d),
                           static_cast<std::uint64_t>(trial), opt_index}));
  Oracle oracle = [&](const Eigen::VectorXd& x) {
    return evaluate_noisy(objective, x, noise_rng);
  };
  const Eigen::VectorXd theta0 = Eigen::VectorXd::Constant(d, 0.5);
  const int budget = static_cast<int>(config.budget);

  if (spec.name == "gibo") {
    GiboConfig gibo = make_gibo_config(config.kind, d, spec.overrides);
    if (config.kind == ExperimentKind::synthetic_within) {
      gibo.params = objective.params();
    }
    return run_gibo(oracle, theta0, gibo, budget, opt_rng);
  }
  if (spec.name == "ars") {
    return run_ars(oracle, theta0, budget, make_ars_config(config.kind, d, spec.overrides),
                   opt_rng);
  }
  // vanilla-bo
  const Eigen::VectorXd lower = Eigen::VectorXd::Zero(d);
  const Eigen::VectorXd upper = Eigen::VectorXd::Ones(d);
  KernelParams params;
  std::optional<HyperPriors> priors;
  if (config.kind == ExperimentKind::synthetic_within) {
    params = objective.params();
  } else {
    priors = synthetic_out_priors(d);
    params = prior_mode_params(d, *priors);
  }
  return run_vanilla_bo(oracle, theta0, lower, upper, budget, params, priors,
                        make_ei_config(spec.overrides), opt_rng);
}

TaskOutput run_synthetic_trial(const ExperimentConfig& config, int d, int trial) {
  TaskOutput out;
  const std::uint64_t objective_seed =
      derive_seed(config.master_seed, {kTagObjective, static_cast<std::uint64_t>(d),
                                       static_cast<std::uint64_t>(trial)});
  SyntheticObjective objective = generate_objective(d, objective_seed);
  if (config.save_objectives) {
    const auto dir = std::filesystem::path(config.output_dir) / "objectives";
    std::filesystem::create_directories(dir);
    save_objective(objective, (dir / ("d" + std::to_string(d) + "_trial" +
                                      std::to_string(trial) + ".json"))
                                  .string());
  }

  for (size_t oi = 0; oi < config.optimizers.size(); ++oi) {
    const OptimizerSpec& spec = config.optimizers[oi];
    const auto started = std::chrono::steady_clock::now();
    try {
      RunHistory history = run_one_synthetic(config, spec, objective, d, trial, oi);
      const std::vector<double> regret = normalized_regret(objective, history);
      for (size_t k = 0; k < history.evals.size(); ++k) {
        const EvalRecord& rec = history.evals[k];
        ResultRow row;
        row.experiment = to_string(config.kind);
        row.optimizer = spec.name;
        row.dimension = d;
        row.trial = trial;
        row.index = static_cast<long long>(k) + 1;
        row.observed = rec.observed;
        row.best_observed = rec.best_observed;
        row.metric = regret[k];
        row.stable = -1;
        out.rows.push_back(std::move(row));
      }
      out.histories.emplace_back(TrialContext{config.kind, d, trial, spec.name},
                                 std::move(history));
    } catch (const std::exception& e) {
      out.failures.push_back(to_string(config.kind) + " d=" + std::to_string(d) +
                             " trial=" + std::to_string(trial) + " " + spec.name + ": " +
                             e.what());
    }
    const std::chrono::duration<double> elapsed =
        std::chrono::steady_clock::now() - started;
    out.seconds_by_optimizer[spec.name] += elapsed.count();
  }
  return out;
}

TaskOutput run_lqr_trial(const ExperimentConfig& config, const LQRInstance& instance,
                         int trial) {
  TaskOutput out;
  const int d = instance.input_dim() * instance.state_dim();
  const RolloutConfig rollout{kLqrTrajectoryLength, 1};
  const int eval_budget =
      static_cast<int>(config.budget / rollout_timesteps(rollout));

  for (size_t oi = 0; oi < config.optimizers.size(); ++oi) {
    const OptimizerSpec& spec = config.optimizers[oi];
    const auto started = std::chrono::steady_clock::now();
    try {
      SplitMix64 noise_rng(derive_seed(
          config.master_seed, {kTagNoise, static_cast<std::uint64_t>(d),
                               static_cast<std::uint64_t>(trial), oi}));
      SplitMix64 opt_rng(derive_seed(
          config.master_seed, {kTagOptimizer, static_cast<std::uint64_t>(d),
                               static_cast<std::uint64_t>(trial), oi}));
      Oracle oracle = [&](const Eigen::VectorXd& theta) {
        return lqr_oracle(theta, instance, rollout, noise_rng);
      };
      const Eigen::VectorXd theta0 = Eigen::VectorXd::Zero(d);

      RunHistory history;
      if (spec.name == "gibo") {
        history = run_gibo(oracle, theta0, make_gibo_config(config.kind, d, spec.overrides),
                           eval_budget, opt_rng);
      } else {
        history = run_ars(oracle, theta0, eval_budget,
                          make_ars_config(config.kind, d, spec.overrides), opt_rng);
      }
      for (size_t k = 0; k < history.evals.size(); ++k) {
        const EvalRecord& rec = history.evals[k];
        const RelativeError err = relative_error(rec.iterate, instance);
        ResultRow row;
        row.experiment = to_string(config.kind);
        row.optimizer = spec.name;
        row.dimension = d;
        row.trial = trial;
        row.index = (static_cast<long long>(k) + 1) * rollout_timesteps(rollout);
        row.observed = rec.observed;
        row.best_observed = rec.best_observed;
        row.metric = err.value;
        row.stable = err.stabilizing ? 1 : 0;
        out.rows.push_back(std::move(row));
      }
      out.histories.emplace_back(TrialContext{config.kind, d, trial, spec.name},
                                 std::move(history));
    } catch (const std::exception& e) {
      out.failures.push_back("lqr trial=" + std::to_string(trial) + " " + spec.name +
                             ": " + e.what());
    }
    const std::chrono::duration<double> elapsed =
        std::chrono::steady_clock::now() - started;
    out.seconds_by_optimizer[spec.name] += elapsed.count();
  }
  return out;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config,
                                const TrialObserver& observer) {
  config.validate();
  const std::vector<int> dims =
      config.kind == ExperimentKind::lqr ? std::vector<int>{9} : config.dimensions;

  // Per-unit budget feasibility is a configuration error, not a trial failure.
  for (int d : dims) {
    for (const OptimizerSpec& spec : config.optimizers) {
      const long long unit = optimizer_unit(spec.name, config.kind, d, spec.overrides);
      const long long evals = config.kind == ExperimentKind::lqr
                                  ? config.budget / kLqrTrajectoryLength
                                  : config.budget;
      if (evals < unit) {
        throw ConfigError("budget: below one update of optimizer '" + spec.name +
                          "' at dimension " + std::to_string(d));
      }
    }
  }

  LQRInstance instance;
  if (config.kind == ExperimentKind::lqr) instance = paper_instance();

  struct Task {
    int dim;
    int trial;
  };
  std::vector<Task> tasks;
  for (int d : dims) {
    for (int t = 0; t < config.trials; ++t) tasks.push_back({d, t});
  }
  std::vector<TaskOutput> outputs(tasks.size());

  std::atomic<size_t> next{0};
  auto worker = [&]() {
    while (true) {
      const size_t i = next.fetch_add(1);
      if (i >= tasks.size()) break;
      outputs[i] = config.kind == ExperimentKind::lqr
                       ? run_lqr_trial(config, instance, tasks[i].trial)
                       : run_synthetic_trial(config, tasks[i].dim, tasks[i].trial);
    }
  };
  const int thread_count = std::min<int>(config.workers, static_cast<int>(tasks.size()));
  if (thread_count <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(thread_count);
    for (int i = 0; i < thread_count; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::filesystem::create_directories(config.output_dir);
  const auto rows_path = std::filesystem::path(config.output_dir) / "rows.csv";
  const auto summary_path = std::filesystem::path(config.output_dir) / "summary.csv";

  std::ofstream rows_file(rows_path);
  if (!rows_file) throw std::runtime_error("run_experiment: cannot write rows CSV");
  rows_file << ResultRow::csv_header() << "\n";

  // (dimension, optimizer) -> final metrics per trial, in deterministic order.
  std::map<std::pair<int, std::string>, std::vector<double>> finals;
  std::map<std::pair<int, std::string>, double> seconds;
  int failed = 0;
  for (size_t i = 0; i < outputs.size(); ++i) {
    const TaskOutput& out = outputs[i];
    for (const ResultRow& row : out.rows) rows_file << row.to_csv() << "\n";
    for (const auto& [optimizer, secs] : out.seconds_by_optimizer) {
      seconds[{tasks[i].dim, optimizer}] += secs;
    }
    // Final metric of each (optimizer) block inside this trial.
    for (size_t r = 0; r < out.rows.size(); ++r) {
      if (r + 1 == out.rows.size() || out.rows[r + 1].optimizer != out.rows[r].optimizer) {
        finals[{out.rows[r].dimension, out.rows[r].optimizer}].push_back(
            out.rows[r].metric);
      }
    }
    for (const auto& [ctx, history] : out.histories) {
      if (observer) observer(ctx, history);
    }
    for (const std::string& message : out.failures) {
      std::fprintf(stderr, "trial failure: %s\n", message.c_str());
      ++failed;
    }
  }
  rows_file.close();

  std::ofstream summary_file(summary_path);
  if (!summary_file) throw std::runtime_error("run_experiment: cannot write summary CSV");
  summary_file << "experiment,optimizer,dimension,trials,final_mean,final_median,"
                  "final_std,final_p02,final_p98,wall_clock_s\n";
  for (int d : dims) {
    for (const OptimizerSpec& spec : config.optimizers) {
      const auto it = finals.find({d, spec.name});
      if (it == finals.end() || it->second.empty()) continue;
      const std::vector<double>& values = it->second;
      summary_file << to_string(config.kind) << ',' << spec.name << ',' << d << ','
                   << values.size() << ',' << format_double(sample_mean(values)) << ','
                   << format_double(percentile(values, 50.0)) << ','
                   << format_double(sample_std(values)) << ','
                   << format_double(percentile(values, 2.0)) << ','
                   << format_double(percentile(values, 98.0)) << ','
                   << format_double(seconds[{d, spec.name}]) << "\n";
    }
  }
  summary_file.close();

  ExperimentResult result;
  result.rows_path = rows_path.string();
  result.summary_path = summary_path.string();
  result.failed_trials = failed;
  return result;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(current);
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  fields.push_back(current);
  return fields;
}

double parse_double(const std::string& s, int line_number) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') {
    throw ParseError("rows file: line " + std::to_string(line_number) +
                     ": bad numeric field '" + s + "'");
  }
  return v;
}

long long parse_int(const std::string& s, int line_number) {
  try {
    size_t pos = 0;
    const long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError("rows file: line " + std::to_string(line_number) +
                     ": bad integer field '" + s + "'");
  }
}

}  // namespace

void export_curves(const std::string& rows_path, const std::string& out_path) {
  std::ifstream in(rows_path);
  if (!in) throw ParseError("rows file: cannot open " + rows_path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("rows file: line 1: empty file");
  if (line != ResultRow::csv_header()) {
    throw ParseError("rows file: line 1: unexpected header");
  }

  // (optimizer, dimension, index) -> metrics across trials.
  std::map<std::tuple<std::string, int, long long>, std::vector<double>> groups;
  int line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != 9) {
      throw ParseError("rows file: line " + std::to_string(line_number) +
                       ": expected 9 fields, got " + std::to_string(fields.size()));
    }
    const std::string& optimizer = fields[1];
    const int dimension = static_cast<int>(parse_int(fields[2], line_number));
    const long long index = parse_int(fields[4], line_number);
    const double metric = parse_double(fields[7], line_number);
    groups[{optimizer, dimension, index}].push_back(metric);
  }

  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("export_curves: cannot write " + out_path);
  out << "optimizer,dimension,index,mean,median,std,p02,p98\n";
  for (const auto& [key, values] : groups) {
    out << std::get<0>(key) << ',' << std::get<1>(key) << ',' << std::get<2>(key) << ','
        << format_double(sample_mean(values)) << ','
        << format_double(percentile(values, 50.0)) << ','
        << format_double(sample_std(values)) << ','
        << format_double(percentile(values, 2.0)) << ','
        << format_double(percentile(values, 98.0)) << "\n";
  }
}

}  // namespace gibo
