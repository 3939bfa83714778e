#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ciota {

/// Raised when a byte stream cannot be decoded. Carries the offset of the
/// first byte that could not be consumed.
class DecodeError : public std::runtime_error {
public:
  DecodeError(std::size_t offset, const std::string& what)
      : std::runtime_error("decode error at byte " + std::to_string(offset) +
                           ": " + what),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

private:
  std::size_t offset_;
};

/// Raised when a text input (trace file, labels file) fails to parse.
class ParseError : public std::runtime_error {
public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("parse error at line " + std::to_string(line) +
                           ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

/// Configuration errors are kept distinct from runtime failures so the CLI
/// can map them to a dedicated exit code.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace ciota
