#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cyclescope {

// Bad run configuration (CLI flags, config file, invalid parameter combos).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Filesystem failures; carries the offending path in the message.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input data; `line` is the 1-based physical line in the stream.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace cyclescope
