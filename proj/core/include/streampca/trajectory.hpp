#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

#include "streampca/linalg.hpp"
#include "streampca/stream.hpp"

namespace streampca {

enum class Separator { kAuto, kComma, kTab, kWhitespace };

struct TrajectoryFormat {
  Separator separator = Separator::kAuto;
};

/// Shape of a trajectory file: one row per timestep, d coordinates per row.
struct TrajectorySource {
  std::filesystem::path path;
  Index dim = 0;
  std::size_t rows = 0;
  bool center = false;
};

/// Row iterator over a delimited text trajectory.
///
/// The separator is detected from the first data line (comma, then tab,
/// otherwise runs of spaces/tabs). A first line whose leading field is not
/// numeric is treated as a header and skipped. Blank lines are only allowed
/// at the end of the file.
class TrajectoryReader final : public SampleStream {
 public:
  explicit TrajectoryReader(const std::filesystem::path& path, TrajectoryFormat format = {});

  Index dim() const override { return dim_; }
  Separator separator() const noexcept { return separator_; }
  bool had_header() const noexcept { return had_header_; }

 protected:
  std::optional<Vector> produce() override;

 private:
  bool read_line(std::string& line);
  Vector parse_row(const std::string& line) const;

  std::ifstream in_;
  Separator separator_;
  Index dim_ = 0;
  bool had_header_ = false;
  std::optional<Vector> pending_;
  bool trailing_blank_ = false;
  std::size_t line_no_ = 0;       // 1-based number of the last line read
  std::size_t line_offset_ = 0;   // byte offset where that line starts
  std::size_t next_offset_ = 0;
};

struct Trajectory {
  TrajectorySource source;
  Matrix samples;  // d x n, one column per row of the file
};

/// Reads an entire trajectory into memory. With `center`, the column mean is
/// subtracted from every sample.
Trajectory load_trajectory(const std::filesystem::path& path, TrajectoryFormat format = {},
                           bool center = false);

/// Writes samples (d x n) as n rows of d comma-separated values with 17
/// significant digits, so reloading is bit-exact.
void write_trajectory(const std::filesystem::path& path, const Matrix& samples);

}  // namespace streampca
