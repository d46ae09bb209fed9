#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "streampca/config.hpp"
#include "streampca/oracle.hpp"

namespace streampca {

/// One row of a trial log, written at every evaluation point.
struct TrialRecord {
  std::string method;
  std::uint64_t seed = 0;
  std::uint64_t step = 0;
  std::uint64_t samples_seen = 0;
  double convergence = 0.0;
  double log_convergence = 0.0;
  double g_value = 0.0;
  double eta = 0.0;
  double alpha = 0.0;
  double wall_time_ms = 0.0;
};

inline constexpr std::string_view kTrialHeader =
    "method,seed,step,samples_seen,convergence,log_convergence,g_value,eta,alpha,wall_time_ms";

/// Materialized data for one (setting, seed): the raw sample matrix that is
/// streamed, the matrix the grader scores against, and its oracle.
class Dataset {
 public:
  Dataset(Matrix raw, CenterMode center, Index k);

  Dataset(const Dataset&) = delete;
  Dataset& operator=(const Dataset&) = delete;

  const Matrix& raw() const noexcept { return raw_; }
  /// Raw samples, or globally centered ones when centering is on.
  const Matrix& scored() const noexcept { return centered_ ? *centered_ : raw_; }
  const Evaluator& evaluator() const noexcept { return *evaluator_; }
  CenterMode center() const noexcept { return center_; }
  const std::optional<Vector>& mean() const noexcept { return mean_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(raw_.cols()); }

 private:
  Matrix raw_;
  CenterMode center_;
  std::optional<Vector> mean_;
  std::optional<Matrix> centered_;
  std::unique_ptr<Evaluator> evaluator_;
};

/// Generates (or loads) the data for `seed`, pulling exactly n samples from
/// the source, and computes V* once.
std::unique_ptr<Dataset> prepare_dataset(const ExperimentConfig& config, std::uint64_t seed);

struct TrialResult {
  std::string setting;
  MethodEntry method;
  std::uint64_t seed = 0;
  std::vector<TrialRecord> records;
  std::size_t samples_streamed = 0;
  std::size_t total_samples = 0;
  std::optional<std::string> error;

  bool ok() const noexcept { return !error.has_value(); }
};

/// Streams the dataset exactly once through one estimator. Errors raised
/// mid-stream are captured in `error` with the records gathered so far.
TrialResult run_trial(const Dataset& data, const ExperimentConfig& config,
                      const MethodEntry& method, std::uint64_t seed);

/// Convenience overload that prepares the dataset itself.
TrialResult run_trial(const ExperimentConfig& config, const MethodEntry& method,
                      std::uint64_t seed);

/// Writes the trial log; a failed trial ends with a "#error,<message>" row.
void write_trial_csv(const std::filesystem::path& path, const TrialResult& trial);
std::vector<TrialRecord> read_trial_csv(const std::filesystem::path& path);
std::string trial_file_name(const MethodEntry& method, std::uint64_t seed);

/// Per (setting, method) medians across seeds.
struct MethodSummary {
  std::string setting;
  std::string method;
  std::size_t seeds = 0;
  std::size_t completed = 0;
  double median_final_convergence = 0.0;
  double median_final_log_convergence = 0.0;
  double median_final_accuracy = 0.0;
  double median_accuracy_at_10pct = 0.0;
};

inline constexpr std::string_view kSummaryHeader =
    "setting,method,seeds,completed,median_final_convergence,median_final_log_convergence,"
    "median_final_accuracy,median_accuracy_at_10pct";

/// Accuracy at the first record with samples_seen >= 0.1 * total.
std::optional<double> accuracy_at_fraction(const std::vector<TrialRecord>& records,
                                           std::size_t total_samples, double fraction = 0.1);

/// Groups by (setting, method) in first-appearance order.
std::vector<MethodSummary> summarize(const std::vector<TrialResult>& trials);

struct SuiteResult {
  std::vector<TrialResult> trials;
  std::vector<MethodSummary> summaries;

  bool ok() const;
};

/// Runs every (setting, seed, method) combination. Trials run on up to
/// thread_budget() threads; results do not depend on the thread count.
/// When an output directory is configured, writes
/// <out>/<setting>/<method>__seed<seed>.csv and <out>/summary.csv.
SuiteResult run_suite(const SuiteConfig& config);

void write_summary_csv(const std::filesystem::path& path,
                       const std::vector<MethodSummary>& summaries);

/// Concatenates every trial CSV under `dir` into one long-format file with a
/// leading "setting" column (the trial's directory relative to `dir`).
/// Returns the number of data rows written.
std::size_t emit_plotdata(const std::filesystem::path& dir, const std::filesystem::path& out);

/// STREAMPCA_THREADS when set and positive, else hardware concurrency.
std::size_t thread_budget();

double median(std::vector<double> values);

}  // namespace streampca
