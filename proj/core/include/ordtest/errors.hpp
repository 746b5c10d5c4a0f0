#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ordtest {

/// Model parameters violate a structural constraint (e.g. pi(0) > 1).
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numeric routine failed to reach its tolerance.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file; carries the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t line)
      : std::runtime_error(message + " (line " + std::to_string(line) + ")"),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// File could not be opened or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ordtest
