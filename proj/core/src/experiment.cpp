#include "streampca/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "streampca/csv.hpp"
#include "streampca/errors.hpp"
#include "streampca/estimators.hpp"
#include "streampca/random.hpp"
#include "streampca/spiked.hpp"
#include "streampca/trajectory.hpp"

namespace streampca {

namespace {

Matrix drain(SampleStream& stream, std::size_t expected) {
  Matrix samples(stream.dim(), static_cast<Index>(expected));
  Index filled = 0;
  while (auto sample = stream.next()) {
    if (filled == samples.cols()) {
      samples.conservativeResize(Eigen::NoChange, std::max<Index>(1, 2 * filled));
    }
    samples.col(filled++) = *sample;
  }
  samples.conservativeResize(Eigen::NoChange, filled);
  return samples;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error("cannot write " + path.string());
  }
  out << text;
}

std::uint64_t to_u64(const std::string& text) { return std::stoull(text); }

}  // namespace

Dataset::Dataset(Matrix raw, CenterMode center, Index k) : raw_(std::move(raw)), center_(center) {
  if (center_ != CenterMode::kNone) {
    mean_ = raw_.rowwise().mean();
    centered_ = raw_.colwise() - *mean_;
  }
  evaluator_ = std::make_unique<Evaluator>(scored(), k);
}

std::unique_ptr<Dataset> prepare_dataset(const ExperimentConfig& config, std::uint64_t seed) {
  const std::uint64_t data_seed = derive_seed(seed, seed_stream::kData);
  Matrix raw;
  switch (config.source) {
    case SourceKind::kSpiked: {
      SpikedModel model = make_spiked_model(config.d, config.k, config.sigma, data_seed);
      SpikedStream stream(std::move(model), derive_seed(data_seed, 1), config.n);
      raw = drain(stream, config.n);
      break;
    }
    case SourceKind::kHarmonic: {
      HarmonicParams params = config.harmonic;
      params.dim = config.d;
      params.seed = data_seed;
      HarmonicStream stream(make_harmonic_model(params), config.n);
      raw = drain(stream, config.n);
      break;
    }
    case SourceKind::kTrajectory: {
      TrajectoryReader reader(config.trajectory_path);
      raw = drain(reader, 0);
      break;
    }
  }
  return std::make_unique<Dataset>(std::move(raw), config.center, config.k);
}

TrialResult run_trial(const Dataset& data, const ExperimentConfig& config,
                      const MethodEntry& method, std::uint64_t seed) {
  using Clock = std::chrono::steady_clock;

  TrialResult result;
  result.setting = config.setting_label();
  result.method = method;
  result.seed = seed;
  result.total_samples = data.size();

  const std::string label = method.label();
  const Index d = data.raw().rows();

  MatrixStream stream(data.raw());
  try {
    EstimatorOptions options;
    options.method = method.method;
    options.accelerate = method.accelerate;
    options.a = method.a;
    options.beta = method.beta;
    options.strict = config.strict;

    // The init seed depends on the trial seed only, so every method of a
    // comparison starts from the same basis.
    Estimator estimator(init_basis(d, config.k, derive_seed(seed, seed_stream::kInit)), options,
                        derive_seed(seed, seed_stream::kSchedule));
    BlockReader reader(stream, config.block);
    Centerer centerer(data.center(), d, data.mean());

    double elapsed_ms = 0.0;
    std::uint64_t samples_seen = 0;
    while (auto raw_block = reader.next()) {
      const auto start = Clock::now();
      const DataBlock block = centerer.apply(*raw_block);
      const StepOutcome outcome = estimator.step(block);
      elapsed_ms += std::chrono::duration<double, std::milli>(Clock::now() - start).count();
      samples_seen += static_cast<std::uint64_t>(block.size());

      const bool last = samples_seen == data.size();
      if (estimator.steps() % config.eval_every == 0 || last) {
        TrialRecord record;
        record.method = label;
        record.seed = seed;
        record.step = estimator.steps();
        record.samples_seen = samples_seen;
        record.convergence = data.evaluator().convergence(estimator.current());
        record.log_convergence = log_convergence(record.convergence);
        record.g_value = outcome.g;
        record.eta = outcome.eta;
        record.alpha = outcome.alpha;
        record.wall_time_ms = config.record_wall_time ? elapsed_ms : 0.0;
        result.records.push_back(std::move(record));
      }
    }
  } catch (const Error& e) {
    result.error = e.what();
    spdlog::error("{} / {} / seed {}: {}", result.setting, label, seed, e.what());
  }
  result.samples_streamed = stream.emitted();
  if (result.ok() && result.samples_streamed != data.size()) {
    throw std::logic_error("trial did not stream every sample exactly once");
  }
  return result;
}

TrialResult run_trial(const ExperimentConfig& config, const MethodEntry& method,
                      std::uint64_t seed) {
  config.validate();
  const auto data = prepare_dataset(config, seed);
  return run_trial(*data, config, method, seed);
}

std::string trial_file_name(const MethodEntry& method, std::uint64_t seed) {
  return fmt::format("{}__seed{}.csv", method.label(), seed);
}

void write_trial_csv(const std::filesystem::path& path, const TrialResult& trial) {
  std::string text(kTrialHeader);
  text += '\n';
  for (const auto& r : trial.records) {
    text += fmt::format("{},{},{},{},{},{},{},{},{},{}\n", r.method, r.seed, r.step,
                        r.samples_seen, format_double(r.convergence),
                        format_double(r.log_convergence), format_double(r.g_value),
                        format_double(r.eta), format_double(r.alpha),
                        format_double(r.wall_time_ms));
  }
  if (trial.error) {
    std::string message = *trial.error;
    std::replace(message.begin(), message.end(), '\n', ' ');
    text += "#error," + message + '\n';
  }
  write_text(path, text);
}

std::vector<TrialRecord> read_trial_csv(const std::filesystem::path& path) {
  const CsvTable table = read_csv(path);
  if (join_csv(table.header) != kTrialHeader) {
    throw SchemaMismatch(path.string() + ": unexpected trial header");
  }
  std::vector<TrialRecord> records;
  records.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    TrialRecord r;
    r.method = row[0];
    r.seed = to_u64(row[1]);
    r.step = to_u64(row[2]);
    r.samples_seen = to_u64(row[3]);
    r.convergence = std::stod(row[4]);
    r.log_convergence = std::stod(row[5]);
    r.g_value = std::stod(row[6]);
    r.eta = std::stod(row[7]);
    r.alpha = std::stod(row[8]);
    r.wall_time_ms = std::stod(row[9]);
    records.push_back(std::move(r));
  }
  return records;
}

double median(std::vector<double> values) {
  if (values.empty()) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) {
    return values[mid];
  }
  return 0.5 * (values[mid - 1] + values[mid]);
}

std::optional<double> accuracy_at_fraction(const std::vector<TrialRecord>& records,
                                           std::size_t total_samples, double fraction) {
  const double mark = fraction * static_cast<double>(total_samples);
  for (const auto& r : records) {
    if (static_cast<double>(r.samples_seen) >= mark) {
      return accuracy(r.convergence);
    }
  }
  return std::nullopt;
}

std::vector<MethodSummary> summarize(const std::vector<TrialResult>& trials) {
  struct Group {
    MethodSummary summary;
    std::vector<double> finals;
    std::vector<double> early;
  };
  std::vector<Group> groups;
  for (const auto& trial : trials) {
    const std::string label = trial.method.label();
    auto it = std::find_if(groups.begin(), groups.end(), [&](const Group& g) {
      return g.summary.setting == trial.setting && g.summary.method == label;
    });
    if (it == groups.end()) {
      groups.push_back({MethodSummary{trial.setting, label}, {}, {}});
      it = std::prev(groups.end());
    }
    ++it->summary.seeds;
    if (!trial.ok() || trial.records.empty()) {
      continue;
    }
    ++it->summary.completed;
    it->finals.push_back(trial.records.back().convergence);
    if (auto acc = accuracy_at_fraction(trial.records, trial.total_samples)) {
      it->early.push_back(*acc);
    }
  }

  std::vector<MethodSummary> out;
  out.reserve(groups.size());
  for (auto& g : groups) {
    std::vector<double> logs;
    std::vector<double> accs;
    for (double c : g.finals) {
      logs.push_back(log_convergence(c));
      accs.push_back(accuracy(c));
    }
    g.summary.median_final_convergence = median(g.finals);
    g.summary.median_final_log_convergence = median(logs);
    g.summary.median_final_accuracy = median(accs);
    g.summary.median_accuracy_at_10pct = median(g.early);
    out.push_back(std::move(g.summary));
  }
  return out;
}

bool SuiteResult::ok() const {
  return std::all_of(trials.begin(), trials.end(), [](const TrialResult& t) { return t.ok(); });
}

void write_summary_csv(const std::filesystem::path& path,
                       const std::vector<MethodSummary>& summaries) {
  std::string text(kSummaryHeader);
  text += '\n';
  for (const auto& s : summaries) {
    text += fmt::format("{},{},{},{},{},{},{},{}\n", s.setting, s.method, s.seeds, s.completed,
                        format_double(s.median_final_convergence),
                        format_double(s.median_final_log_convergence),
                        format_double(s.median_final_accuracy),
                        format_double(s.median_accuracy_at_10pct));
  }
  write_text(path, text);
}

std::size_t thread_budget() {
  if (const char* env = std::getenv("STREAMPCA_THREADS")) {
    char* end = nullptr;
    const long value = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && value > 0) {
      return static_cast<std::size_t>(value);
    }
    spdlog::warn("ignoring invalid STREAMPCA_THREADS='{}'", env);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

SuiteResult run_suite(const SuiteConfig& config) {
  const std::vector<ExperimentConfig> cells = config.expand();
  for (const auto& cell : cells) {
    cell.validate();
  }

  struct Task {
    const ExperimentConfig* cell;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (const auto& cell : cells) {
    for (auto seed : cell.seeds) {
      tasks.push_back({&cell, seed});
    }
  }

  const std::filesystem::path& out_dir = config.base.output;
  std::vector<std::vector<TrialResult>> results(tasks.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      const auto& [cell, seed] = tasks[i];
      std::unique_ptr<Dataset> data;
      std::optional<std::string> failure;
      try {
        data = prepare_dataset(*cell, seed);
      } catch (const Error& e) {
        failure = e.what();
        spdlog::error("{} / seed {}: {}", cell->setting_label(), seed, e.what());
      }
      for (const auto& method : cell->methods) {
        TrialResult trial;
        if (data) {
          trial = run_trial(*data, *cell, method, seed);
        } else {
          trial.setting = cell->setting_label();
          trial.method = method;
          trial.seed = seed;
          trial.error = failure;
        }
        if (!out_dir.empty()) {
          write_trial_csv(out_dir / trial.setting / trial_file_name(method, seed), trial);
        }
        results[i].push_back(std::move(trial));
      }
    }
  };

  const std::size_t threads = std::min(thread_budget(), tasks.size());
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back(worker);
    }
  }

  SuiteResult suite;
  for (auto& batch : results) {
    for (auto& trial : batch) {
      suite.trials.push_back(std::move(trial));
    }
  }
  suite.summaries = summarize(suite.trials);
  if (!out_dir.empty()) {
    write_summary_csv(out_dir / "summary.csv", suite.summaries);
  }
  return suite;
}

std::size_t emit_plotdata(const std::filesystem::path& dir, const std::filesystem::path& out) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) {
    throw Error("not a directory: " + dir.string());
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".csv" ||
        entry.path().filename() == "summary.csv") {
      continue;
    }
    if (fs::exists(out) && fs::equivalent(entry.path(), out)) {
      continue;
    }
    files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  std::string text = "setting," + std::string(kTrialHeader) + '\n';
  std::size_t rows = 0;
  for (const auto& file : files) {
    std::string setting = fs::relative(file.parent_path(), dir).generic_string();
    if (setting.empty()) {
      setting = ".";
    }
    std::ifstream in(file, std::ios::binary);
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') {
        line.pop_back();
      }
      if (line.empty() || line.front() == '#') {
        continue;
      }
      if (!header_seen) {
        if (line != kTrialHeader) {
          throw SchemaMismatch(file.string() + ": not a trial CSV");
        }
        header_seen = true;
        continue;
      }
      text += setting;
      text += ',';
      text += line;
      text += '\n';
      ++rows;
    }
  }
  write_text(out, text);
  return rows;
}

}  // namespace streampca
