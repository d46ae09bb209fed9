#include "streampca/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "streampca/errors.hpp"

namespace streampca {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

std::string normalize_key(std::string_view key) {
  std::string out(trim(key));
  for (char& c : out) {
    c = c == '_' ? '-' : static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

std::vector<std::string_view> split_list(std::string_view text) {
  std::vector<std::string_view> items;
  std::size_t begin = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == ',') {
      const auto item = trim(text.substr(begin, i - begin));
      if (!item.empty()) {
        items.push_back(item);
      }
      begin = i + 1;
    }
  }
  return items;
}

template <typename T>
T parse_value(std::string_view key, std::string_view text) {
  text = trim(text);
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ConfigError(fmt::format("bad value '{}' for '{}'", text, key));
  }
  return value;
}

template <typename T>
std::vector<T> parse_list(std::string_view key, std::string_view text) {
  std::vector<T> values;
  for (auto item : split_list(text)) {
    values.push_back(parse_value<T>(key, item));
  }
  if (values.empty()) {
    throw ConfigError(fmt::format("empty value for '{}'", key));
  }
  return values;
}

bool parse_bool(std::string_view key, std::string_view text) {
  const std::string v = normalize_key(text);
  if (v == "1" || v == "true" || v == "on" || v == "yes") {
    return true;
  }
  if (v == "0" || v == "false" || v == "off" || v == "no") {
    return false;
  }
  throw ConfigError(fmt::format("bad boolean '{}' for '{}'", text, key));
}

std::string compact(double value) { return fmt::format("{:g}", value); }

}  // namespace

std::string_view source_name(SourceKind kind) {
  switch (kind) {
    case SourceKind::kSpiked:
      return "spiked";
    case SourceKind::kHarmonic:
      return "harmonic";
    case SourceKind::kTrajectory:
      return "trajectory";
  }
  return "unknown";
}

SourceKind parse_source(std::string_view name) {
  if (name == "spiked") {
    return SourceKind::kSpiked;
  }
  if (name == "harmonic") {
    return SourceKind::kHarmonic;
  }
  if (name == "trajectory" || name == "trajectory-file" || name == "file") {
    return SourceKind::kTrajectory;
  }
  throw ConfigError("unknown source '" + std::string(name) + "'");
}

std::string_view center_name(CenterMode mode) {
  switch (mode) {
    case CenterMode::kNone:
      return "none";
    case CenterMode::kPrecomputedMean:
      return "precomputed";
    case CenterMode::kRunningMean:
      return "running";
  }
  return "unknown";
}

CenterMode parse_center(std::string_view name) {
  if (name == "none" || name == "off" || name == "false") {
    return CenterMode::kNone;
  }
  if (name == "precomputed" || name == "precomputed-mean" || name == "on" || name == "true") {
    return CenterMode::kPrecomputedMean;
  }
  if (name == "running" || name == "running-mean") {
    return CenterMode::kRunningMean;
  }
  throw ConfigError("unknown centering mode '" + std::string(name) + "'");
}

std::string MethodEntry::label() const {
  std::string out(method_name(method));
  if (accelerate) {
    out += "+acc";
  }
  return out;
}

MethodEntry parse_method_entry(std::string_view text) {
  text = trim(text);
  MethodEntry entry;
  constexpr std::string_view kSuffix = "+acc";
  if (text.size() > kSuffix.size() && text.substr(text.size() - kSuffix.size()) == kSuffix) {
    entry.accelerate = true;
    text.remove_suffix(kSuffix.size());
  }
  entry.method = parse_method(text);
  return entry;
}

void ExperimentConfig::validate() const {
  if (methods.empty()) {
    throw ConfigError("no methods configured");
  }
  if (seeds.empty()) {
    throw ConfigError("no seeds configured");
  }
  if (block < 1) {
    throw ConfigError("block size must be >= 1");
  }
  if (k < 1) {
    throw ConfigError("k must be >= 1");
  }
  if (eval_every < 1) {
    throw ConfigError("eval-every must be >= 1");
  }
  for (const auto& m : methods) {
    if (!(m.a >= 0.0)) {
      throw ConfigError("schedule amplitude a must be >= 0");
    }
  }
  switch (source) {
    case SourceKind::kSpiked:
      if (d < k) {
        throw ConfigError("spiked source needs d >= k");
      }
      if (!(sigma >= 0.0)) {
        throw ConfigError("sigma must be >= 0");
      }
      if (n < 2) {
        throw ConfigError("n must be >= 2");
      }
      break;
    case SourceKind::kHarmonic:
      if (d < harmonic.mode_count || harmonic.mode_count < 1) {
        throw ConfigError("harmonic source needs d >= modes >= 1");
      }
      if (n < 2) {
        throw ConfigError("n must be >= 2");
      }
      break;
    case SourceKind::kTrajectory:
      if (trajectory_path.empty()) {
        throw ConfigError("trajectory source needs a path");
      }
      break;
  }
}

std::string ExperimentConfig::setting_label() const {
  switch (source) {
    case SourceKind::kSpiked:
      return fmt::format("spiked_d{}_k{}_sigma{}", d, k, compact(sigma));
    case SourceKind::kHarmonic:
      return fmt::format("harmonic_d{}_k{}_modes{}_noise{}", d, k, harmonic.mode_count,
                         compact(harmonic.noise_sigma));
    case SourceKind::kTrajectory:
      return fmt::format("trajectory_{}_k{}", trajectory_path.stem().string(), k);
  }
  return "unknown";
}

std::vector<ExperimentConfig> SuiteConfig::expand() const {
  const std::vector<Index> ds = d_values.empty() ? std::vector<Index>{base.d} : d_values;
  const std::vector<Index> ks = k_values.empty() ? std::vector<Index>{base.k} : k_values;
  const std::vector<double> sigmas =
      sigma_values.empty() ? std::vector<double>{base.sigma} : sigma_values;
  std::vector<ExperimentConfig> cells;
  for (Index d : ds) {
    for (double sigma : sigmas) {
      for (Index k : ks) {
        ExperimentConfig cell = base;
        cell.d = d;
        cell.sigma = sigma;
        cell.k = k;
        cells.push_back(std::move(cell));
      }
    }
  }
  return cells;
}

std::vector<std::uint64_t> parse_seeds(std::string_view text) {
  text = trim(text);
  const auto dots = text.find("..");
  std::vector<std::uint64_t> seeds;
  if (dots != std::string_view::npos) {
    const auto lo = parse_value<std::uint64_t>("seeds", text.substr(0, dots));
    const auto hi = parse_value<std::uint64_t>("seeds", text.substr(dots + 2));
    if (hi < lo) {
      throw ConfigError("seed range is empty");
    }
    for (auto s = lo; s <= hi; ++s) {
      seeds.push_back(s);
    }
    return seeds;
  }
  return parse_list<std::uint64_t>("seeds", text);
}

KeyValues parse_key_values(std::string_view text) {
  KeyValues values;
  std::size_t line_no = 0;
  std::size_t begin = 0;
  while (begin <= text.size()) {
    auto end = text.find('\n', begin);
    if (end == std::string_view::npos) {
      end = text.size();
    }
    ++line_no;
    auto line = text.substr(begin, end - begin);
    begin = end + 1;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(fmt::format("line {}: expected key = value", line_no));
    }
    values[normalize_key(line.substr(0, eq))] = std::string(trim(line.substr(eq + 1)));
  }
  return values;
}

KeyValues read_key_values(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file " + path.string());
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_key_values(buffer.str());
}

void apply_settings(SuiteConfig& config, const KeyValues& values) {
  ExperimentConfig& base = config.base;
  std::optional<double> a;
  std::optional<double> beta;
  bool accelerate_all = false;

  for (const auto& [raw_key, value] : values) {
    const std::string key = normalize_key(raw_key);
    if (key == "source") {
      base.source = parse_source(value);
    } else if (key == "d") {
      config.d_values = parse_list<Index>(key, value);
      base.d = config.d_values.front();
    } else if (key == "k") {
      config.k_values = parse_list<Index>(key, value);
      base.k = config.k_values.front();
    } else if (key == "sigma") {
      config.sigma_values = parse_list<double>(key, value);
      base.sigma = config.sigma_values.front();
    } else if (key == "n") {
      base.n = parse_value<std::size_t>(key, value);
    } else if (key == "block" || key == "b") {
      base.block = parse_value<Index>(key, value);
    } else if (key == "methods" || key == "method") {
      base.methods.clear();
      for (auto item : split_list(value)) {
        base.methods.push_back(parse_method_entry(item));
      }
    } else if (key == "accelerate") {
      accelerate_all = parse_bool(key, value);
    } else if (key == "a") {
      a = parse_value<double>(key, value);
    } else if (key == "beta") {
      beta = parse_value<double>(key, value);
    } else if (key == "seeds") {
      base.seeds = parse_seeds(value);
    } else if (key == "eval-every") {
      base.eval_every = parse_value<std::size_t>(key, value);
    } else if (key == "out" || key == "output") {
      base.output = value;
    } else if (key == "path" || key == "input") {
      base.trajectory_path = value;
    } else if (key == "center") {
      base.center = parse_center(normalize_key(value));
    } else if (key == "strict") {
      base.strict = parse_bool(key, value);
    } else if (key == "timing") {
      base.record_wall_time = parse_bool(key, value);
    } else if (key == "modes") {
      base.harmonic.mode_count = parse_value<Index>(key, value);
    } else if (key == "amplitude-max") {
      base.harmonic.amplitude_max = parse_value<double>(key, value);
    } else if (key == "amplitude-min") {
      base.harmonic.amplitude_min = parse_value<double>(key, value);
    } else if (key == "frequency-min") {
      base.harmonic.frequency_min = parse_value<double>(key, value);
    } else if (key == "frequency-max") {
      base.harmonic.frequency_max = parse_value<double>(key, value);
    } else if (key == "noise") {
      base.harmonic.noise_sigma = parse_value<double>(key, value);
    } else {
      throw ConfigError("unknown setting '" + raw_key + "'");
    }
  }

  for (auto& m : base.methods) {
    if (a) {
      m.a = *a;
    }
    if (beta) {
      m.beta = *beta;
    }
    if (accelerate_all) {
      m.accelerate = true;
    }
  }
}

}  // namespace streampca
