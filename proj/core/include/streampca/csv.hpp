#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace streampca {

/// Shortest text that round-trips: 17 significant digits.
std::string format_double(double value);

/// Minimal comma-separated table. Fields never contain commas or quotes.
/// Lines starting with '#' and blank lines are skipped on read.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Position of `name` in the header; throws SchemaMismatch when absent.
  std::size_t column(std::string_view name) const;
};

std::vector<std::string> split_csv_line(std::string_view line);
CsvTable read_csv(const std::filesystem::path& path);
std::string join_csv(const std::vector<std::string>& fields);

}  // namespace streampca
