#include "streampca/errors.hpp"

#include <string>

namespace streampca {

NearZeroVector::NearZeroVector(double norm)
    : Error("near-zero vector (norm " + std::to_string(norm) + ")"), norm_(norm) {}

RankDeficient::RankDeficient(std::size_t column)
    : Error("rank deficient at column " + std::to_string(column)), column_(column) {}

ParseError::ParseError(std::size_t line, std::size_t column, std::size_t byte_offset,
                       const std::string& what)
    : Error("parse error at line " + std::to_string(line) + ", column " +
            std::to_string(column) + " (byte " + std::to_string(byte_offset) + "): " + what),
      line_(line),
      column_(column),
      byte_offset_(byte_offset) {}

RaggedRows::RaggedRows(std::size_t expected, std::size_t got, std::size_t line)
    : Error("ragged rows: expected " + std::to_string(expected) + " fields, got " +
            std::to_string(got) + " at line " + std::to_string(line)),
      expected_(expected),
      got_(got),
      line_(line) {}

}  // namespace streampca
