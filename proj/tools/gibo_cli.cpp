#include <CLI11.hpp>
#include <cstdio>
#include <optional>
#include <string>

#include "gibo/errors.hpp"
#include "gibo/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Seeded benchmark runner for GIBO and baseline optimizers"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<std::string> out_dir;
  CLI::App* run = app.add_subcommand("run", "Run the experiment described by a config");
  run->add_option("config", config_path, "Path to the experiment config (JSON)")
      ->required();
  run->add_option("--seed", seed, "Override the master seed");
  run->add_option("--workers", workers, "Concurrent trial workers");
  run->add_option("--out", out_dir, "Output directory for result CSVs");

  std::string rows_path;
  std::string curves_path;
  CLI::App* exp = app.add_subcommand("export", "Aggregate a rows CSV into curve bands");
  exp->add_option("rows", rows_path, "Path to a rows.csv produced by run")->required();
  exp->add_option("--out", curves_path, "Output curves CSV path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      gibo::ExperimentConfig config = gibo::ExperimentConfig::from_file(config_path);
      if (seed) config.master_seed = *seed;
      if (workers) config.workers = *workers;
      if (out_dir) config.output_dir = *out_dir;
      config.validate();
      const gibo::ExperimentResult result = gibo::run_experiment(config);
      std::printf("rows: %s\nsummary: %s\n", result.rows_path.c_str(),
                  result.summary_path.c_str());
      if (result.failed_trials > 0) {
        std::fprintf(stderr, "%d trial(s) failed and were skipped\n",
                     result.failed_trials);
      }
      return result.exit_code();
    }
    gibo::export_curves(rows_path, curves_path);
    std::printf("curves: %s\n", curves_path.c_str());
    return 0;
  } catch (const gibo::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const gibo::ParseError& e) {
    std::fprintf(stderr, "parse error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
