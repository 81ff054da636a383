#pragma once

#include <stdexcept>
#include <string>

namespace cactus {

// Bad user input: malformed files, unknown loops, violated preconditions.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input file error tied to a 1-based line number (0 when not line specific).
class ParseError : public InputError {
 public:
  ParseError(int line, const std::string& reason)
      : InputError(line > 0 ? "line " + std::to_string(line) + ": " + reason : reason), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

// A configured work budget was exhausted before the computation finished.
class ResourceCapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Something that should be impossible for valid rational data happened.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace cactus
