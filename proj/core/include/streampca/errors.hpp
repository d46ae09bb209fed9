#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace streampca {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidDims : public Error {
 public:
  using Error::Error;
};

/// A vector whose norm fell under the near-zero threshold, typically a
/// degenerate streaming update. Callers decide the fallback.
class NearZeroVector : public Error {
 public:
  explicit NearZeroVector(double norm);
  double norm() const noexcept { return norm_; }

 private:
  double norm_;
};

/// Gram-Schmidt found column `column` (zero-based) linearly dependent on
/// the columns to its left.
class RankDeficient : public Error {
 public:
  explicit RankDeficient(std::size_t column);
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t column_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, std::size_t byte_offset,
             const std::string& what);
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  std::size_t byte_offset() const noexcept { return byte_offset_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::size_t byte_offset_;
};

class RaggedRows : public Error {
 public:
  RaggedRows(std::size_t expected, std::size_t got, std::size_t line);
  std::size_t expected() const noexcept { return expected_; }
  std::size_t got() const noexcept { return got_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t expected_;
  std::size_t got_;
  std::size_t line_;
};

class InsufficientSamples : public Error {
 public:
  using Error::Error;
};

/// The reference energy ||X^T V*||_F^2 is zero, so convergence is undefined.
class ZeroEnergy : public Error {
 public:
  using Error::Error;
};

class SchemaMismatch : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace streampca
