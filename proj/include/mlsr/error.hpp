#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mlsr {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input data (unknown world, bad JSON shape, ...).
class InputError : public Error {
 public:
  using Error::Error;
};

class ParseError : public InputError {
 public:
  ParseError(const std::string& msg, std::size_t pos)
      : InputError(msg + " at position " + std::to_string(pos)), position_(pos) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

}  // namespace mlsr
