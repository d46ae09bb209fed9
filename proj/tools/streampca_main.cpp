// streampca: command line front end for streaming PCA experiments.
//
//   streampca run --source spiked --d 100 --k 1 --sigma 0.5 --n 10000 --block 5 \
//                 --method block-power --accelerate --a 2.0 --seeds 1..10 \
//                 --eval-every 10 --out DIR
//   streampca suite --config FILE --out DIR
//   streampca oracle --input traj.csv --k 20 --center --out modes.csv
//   streampca plotdata --in DIR --out plot.csv

#include <CLI11.hpp>

#include <fmt/format.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "streampca/config.hpp"
#include "streampca/csv.hpp"
#include "streampca/errors.hpp"
#include "streampca/experiment.hpp"
#include "streampca/oracle.hpp"
#include "streampca/trajectory.hpp"

namespace {

using streampca::KeyValues;

// Flags are gathered as strings and fed through the same key = value path as
// config files, so a flag overrides the file entry of the same name.
struct ExperimentFlags {
  std::map<std::string, std::string> values;
  std::vector<std::string> methods;
  bool accelerate = false;
  bool strict = false;
  bool no_timing = false;

  void add(CLI::App& app) {
    for (const char* key : {"source", "d", "k", "sigma", "n", "block", "a", "beta", "seeds",
                            "eval-every", "out", "path", "center", "modes", "noise",
                            "amplitude-max", "amplitude-min", "frequency-min",
                            "frequency-max"}) {
      app.add_option(std::string("--") + key, values[key]);
    }
    app.add_option("--method", methods, "method name, optionally suffixed with +acc")
        ->take_all();
    app.add_flag("--accelerate", accelerate, "apply the acceleration step to every method");
    app.add_flag("--strict", strict, "abort on degenerate updates");
    app.add_flag("--no-timing", no_timing, "write 0 for wall_time_ms (byte-stable output)");
  }

  KeyValues collect() const {
    KeyValues out;
    for (const auto& [key, value] : values) {
      if (!value.empty()) {
        out[key] = value;
      }
    }
    if (!methods.empty()) {
      std::string joined;
      for (const auto& m : methods) {
        joined += (joined.empty() ? "" : ",") + m;
      }
      out["methods"] = joined;
    }
    if (accelerate) {
      out["accelerate"] = "true";
    }
    if (strict) {
      out["strict"] = "true";
    }
    if (no_timing) {
      out["timing"] = "off";
    }
    return out;
  }
};

void print_summary(const streampca::SuiteResult& result) {
  fmt::print("{:<36} {:<26} {:>5} {:>12} {:>10} {:>10}\n", "setting", "method", "done",
             "final_conv", "final_acc", "acc@10%");
  for (const auto& s : result.summaries) {
    fmt::print("{:<36} {:<26} {:>2}/{:<2} {:>12.4e} {:>10.6f} {:>10.6f}\n", s.setting, s.method,
               s.completed, s.seeds, s.median_final_convergence, s.median_final_accuracy,
               s.median_accuracy_at_10pct);
  }
  for (const auto& t : result.trials) {
    if (!t.ok()) {
      fmt::print(stderr, "FAILED {} / {} / seed {}: {}\n", t.setting, t.method.label(), t.seed,
                 *t.error);
    }
  }
}

int run_experiments(const std::optional<std::string>& config_file, const ExperimentFlags& flags,
                    bool default_method) {
  streampca::SuiteConfig config;
  if (default_method) {
    config.base.methods = {streampca::MethodEntry{}};
  }
  if (config_file) {
    streampca::apply_settings(config, streampca::read_key_values(*config_file));
  }
  streampca::apply_settings(config, flags.collect());
  const auto result = streampca::run_suite(config);
  print_summary(result);
  if (!config.base.output.empty()) {
    fmt::print("wrote {}\n", (config.base.output / "summary.csv").string());
  }
  return result.ok() ? 0 : 1;
}

int run_oracle(const std::string& input, streampca::Index k, bool center,
               const std::string& out_path) {
  const auto trajectory = streampca::load_trajectory(input, {}, center);
  const auto& x = trajectory.samples;
  const auto result = streampca::batch_pca(x, k);
  fmt::print("{}: d={} n={} path={}\n", input, x.rows(), x.cols(),
             result.path == streampca::PcaPath::kGram ? "gram" : "covariance");
  for (streampca::Index j = 0; j < result.values.size(); ++j) {
    fmt::print("  lambda_{} = {:.10g}\n", j + 1, result.values[j]);
  }
  if (result.values.size() >= 2) {
    fmt::print("  eigengap = {:.10g}\n", result.eigengap());
  }

  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    throw streampca::Error("cannot write " + out_path);
  }
  std::string line = "mode,eigenvalue";
  for (streampca::Index i = 0; i < x.rows(); ++i) {
    line += fmt::format(",c{}", i);
  }
  out << line << '\n';
  for (streampca::Index j = 0; j < result.basis.rank(); ++j) {
    line = fmt::format("{},{}", j + 1, streampca::format_double(result.values[j]));
    for (streampca::Index i = 0; i < x.rows(); ++i) {
      line += ',';
      line += streampca::format_double(result.basis.matrix()(i, j));
    }
    out << line << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Streaming, memory-limited PCA with projection-based acceleration"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run seeded trials for one setting");
  std::optional<std::string> run_config;
  run->add_option("--config", run_config, "key = value settings file")->check(CLI::ExistingFile);
  ExperimentFlags run_flags;
  run_flags.add(*run);

  auto* suite = app.add_subcommand("suite", "run a grid of settings from a config file");
  std::optional<std::string> suite_config;
  suite->add_option("--config", suite_config, "key = value settings file")
      ->required()
      ->check(CLI::ExistingFile);
  ExperimentFlags suite_flags;
  suite_flags.add(*suite);

  auto* oracle = app.add_subcommand("oracle", "export batch PCA modes of a trajectory");
  std::string oracle_input;
  std::string oracle_out = "modes.csv";
  streampca::Index oracle_k = 1;
  bool oracle_center = false;
  oracle->add_option("--input", oracle_input)->required()->check(CLI::ExistingFile);
  oracle->add_option("--k", oracle_k)->check(CLI::PositiveNumber);
  oracle->add_flag("--center", oracle_center, "subtract the per-coordinate mean first");
  oracle->add_option("--out", oracle_out);

  auto* plot = app.add_subcommand("plotdata", "merge trial CSVs into one long-format CSV");
  std::string plot_in;
  std::string plot_out = "plot.csv";
  plot->add_option("--in", plot_in)->required()->check(CLI::ExistingDirectory);
  plot->add_option("--out", plot_out);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      return run_experiments(run_config, run_flags, true);
    }
    if (suite->parsed()) {
      return run_experiments(suite_config, suite_flags, false);
    }
    if (oracle->parsed()) {
      return run_oracle(oracle_input, oracle_k, oracle_center, oracle_out);
    }
    if (plot->parsed()) {
      const auto rows = streampca::emit_plotdata(plot_in, plot_out);
      fmt::print("wrote {} rows to {}\n", rows, plot_out);
      return 0;
    }
  } catch (const streampca::ConfigError& e) {
    fmt::print(stderr, "config error: {}\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
  return 0;
}
