#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "streampca/estimators.hpp"
#include "streampca/harmonic.hpp"
#include "streampca/stream.hpp"

namespace streampca {

enum class SourceKind { kSpiked, kHarmonic, kTrajectory };

std::string_view source_name(SourceKind kind);
SourceKind parse_source(std::string_view name);
std::string_view center_name(CenterMode mode);
CenterMode parse_center(std::string_view name);

/// One estimator in a comparison run.
struct MethodEntry {
  Method method = Method::kBlockPower;
  bool accelerate = false;
  double a = 2.0;
  double beta = 0.1;

  /// e.g. "block-power+acc", "oja", "momentum-block-power".
  std::string label() const;
};

/// Parses "<method>" or "<method>+acc".
MethodEntry parse_method_entry(std::string_view text);

struct ExperimentConfig {
  SourceKind source = SourceKind::kSpiked;
  Index d = 100;
  Index k = 1;
  double sigma = 0.5;
  std::size_t n = 10000;

  // harmonic source; dim and seed are taken from d and the trial seed
  HarmonicParams harmonic;

  // trajectory source
  std::filesystem::path trajectory_path;
  CenterMode center = CenterMode::kNone;

  std::vector<MethodEntry> methods;
  Index block = 5;
  std::vector<std::uint64_t> seeds{1};
  std::size_t eval_every = 10;
  std::filesystem::path output;
  bool strict = false;
  bool record_wall_time = true;

  /// Throws ConfigError describing the first invalid field.
  void validate() const;

  /// Directory-safe name for this setting, e.g. "spiked_d100_k1_sigma0.5".
  std::string setting_label() const;
};

/// Grid axes for a suite; each empty axis falls back to the base value.
struct SuiteConfig {
  ExperimentConfig base;
  std::vector<Index> d_values;
  std::vector<Index> k_values;
  std::vector<double> sigma_values;

  /// Cross product d x sigma x k, in that nesting order.
  std::vector<ExperimentConfig> expand() const;
};

/// "1..10", "1,4,9" or "7".
std::vector<std::uint64_t> parse_seeds(std::string_view text);

/// Flat "key = value" text; '#' starts a comment. Keys accept '-' or '_'.
using KeyValues = std::map<std::string, std::string>;
KeyValues parse_key_values(std::string_view text);
KeyValues read_key_values(const std::filesystem::path& path);

/// Applies every recognised key onto `config` (later calls win, which is
/// how CLI flags override a config file). Throws ConfigError on unknown keys
/// or malformed values.
void apply_settings(SuiteConfig& config, const KeyValues& values);

}  // namespace streampca
