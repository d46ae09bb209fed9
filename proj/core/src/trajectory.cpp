#include "streampca/trajectory.hpp"

#include <charconv>
#include <cmath>
#include <string_view>
#include <vector>

#include <fmt/format.h>

#include "streampca/errors.hpp"

namespace streampca {

namespace {

struct Field {
  std::size_t start;  // byte position within the line
  std::string_view text;
};

bool is_blank(char c) { return c == ' ' || c == '\t'; }

bool blank_line(std::string_view line) {
  for (char c : line) {
    if (!is_blank(c)) {
      return false;
    }
  }
  return true;
}

Field trimmed(std::string_view line, std::size_t begin, std::size_t end) {
  while (begin < end && is_blank(line[begin])) {
    ++begin;
  }
  while (end > begin && is_blank(line[end - 1])) {
    --end;
  }
  return {begin, line.substr(begin, end - begin)};
}

std::vector<Field> split(std::string_view line, Separator sep) {
  std::vector<Field> fields;
  if (sep == Separator::kWhitespace) {
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && is_blank(line[i])) {
        ++i;
      }
      if (i == line.size()) {
        break;
      }
      const std::size_t begin = i;
      while (i < line.size() && !is_blank(line[i])) {
        ++i;
      }
      fields.push_back({begin, line.substr(begin, i - begin)});
    }
    return fields;
  }
  const char delim = sep == Separator::kComma ? ',' : '\t';
  std::size_t begin = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == delim) {
      fields.push_back(trimmed(line, begin, i));
      begin = i + 1;
    }
  }
  return fields;
}

std::optional<double> parse_number(std::string_view text) {
  if (!text.empty() && text.front() == '+') {
    text.remove_prefix(1);
  }
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || text.empty()) {
    return std::nullopt;
  }
  return value;
}

Separator detect(std::string_view line) {
  if (line.find(',') != std::string_view::npos) {
    return Separator::kComma;
  }
  if (line.find('\t') != std::string_view::npos) {
    return Separator::kTab;
  }
  return Separator::kWhitespace;
}

}  // namespace

TrajectoryReader::TrajectoryReader(const std::filesystem::path& path, TrajectoryFormat format)
    : in_(path, std::ios::binary), separator_(format.separator) {
  if (!in_) {
    throw Error("cannot open trajectory file " + path.string());
  }
  std::string line;
  if (!read_line(line) || blank_line(line)) {
    throw ParseError(1, 1, 0, "trajectory has no data rows");
  }
  if (separator_ == Separator::kAuto) {
    separator_ = detect(line);
  }
  const auto fields = split(line, separator_);
  if (fields.empty() || !parse_number(fields.front().text)) {
    had_header_ = true;
    if (!read_line(line) || blank_line(line)) {
      throw ParseError(line_no_, 1, line_offset_, "trajectory has no data rows");
    }
    if (format.separator == Separator::kAuto) {
      separator_ = detect(line);
    }
  }
  dim_ = static_cast<Index>(split(line, separator_).size());
  pending_ = parse_row(line);
}

bool TrajectoryReader::read_line(std::string& line) {
  if (!std::getline(in_, line)) {
    return false;
  }
  ++line_no_;
  line_offset_ = next_offset_;
  next_offset_ += line.size() + (in_.eof() ? 0 : 1);
  if (!line.empty() && line.back() == '\r') {
    line.pop_back();
  }
  return true;
}

Vector TrajectoryReader::parse_row(const std::string& line) const {
  const auto fields = split(line, separator_);
  if (static_cast<Index>(fields.size()) != dim_) {
    throw RaggedRows(static_cast<std::size_t>(dim_), fields.size(), line_no_);
  }
  Vector row(dim_);
  for (Index j = 0; j < dim_; ++j) {
    const auto& field = fields[static_cast<std::size_t>(j)];
    const auto value = parse_number(field.text);
    if (!value || !std::isfinite(*value)) {
      throw ParseError(line_no_, field.start + 1, line_offset_ + field.start,
                       "expected a finite number, got '" + std::string(field.text) + "'");
    }
    row[j] = *value;
  }
  return row;
}

std::optional<Vector> TrajectoryReader::produce() {
  if (pending_) {
    auto row = std::move(pending_);
    pending_.reset();
    return row;
  }
  std::string line;
  while (read_line(line)) {
    if (blank_line(line)) {
      trailing_blank_ = true;
      continue;
    }
    if (trailing_blank_) {
      throw ParseError(line_no_, 1, line_offset_, "data row after a blank line");
    }
    return parse_row(line);
  }
  return std::nullopt;
}

Trajectory load_trajectory(const std::filesystem::path& path, TrajectoryFormat format,
                           bool center) {
  TrajectoryReader reader(path, format);
  std::vector<Vector> rows;
  while (auto row = reader.next()) {
    rows.push_back(std::move(*row));
  }
  Trajectory out;
  out.source = {path, reader.dim(), rows.size(), center};
  out.samples.resize(reader.dim(), static_cast<Index>(rows.size()));
  for (std::size_t j = 0; j < rows.size(); ++j) {
    out.samples.col(static_cast<Index>(j)) = rows[j];
  }
  if (center) {
    const Vector mean = out.samples.rowwise().mean();
    out.samples.colwise() -= mean;
  }
  return out;
}

void write_trajectory(const std::filesystem::path& path, const Matrix& samples) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error("cannot write trajectory file " + path.string());
  }
  std::string line;
  for (Index j = 0; j < samples.cols(); ++j) {
    line.clear();
    for (Index i = 0; i < samples.rows(); ++i) {
      if (i > 0) {
        line += ',';
      }
      fmt::format_to(std::back_inserter(line), "{:.17g}", samples(i, j));
    }
    line += '\n';
    out << line;
  }
}

}  // namespace streampca
