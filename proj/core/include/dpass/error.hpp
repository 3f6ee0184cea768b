#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dpass {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DivisionByZero : public Error {
 public:
  DivisionByZero() : Error("division by zero") {}
};

// Raised by numeric evaluation when a denominator, negative power or log
// argument is too close to a singularity.
class PoleError : public Error {
 public:
  using Error::Error;
};

class MissingAtomError : public Error {
 public:
  using Error::Error;
};

// Numeric zero-testing could not find a single regular sample point.
class IndeterminateError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::string message, std::size_t position)
      : Error(message + " at offset " + std::to_string(position)),
        message_(std::move(message)),
        position_(position) {}

  const std::string& message() const noexcept { return message_; }
  std::size_t position() const noexcept { return position_; }

 private:
  std::string message_;
  std::size_t position_;
};

}  // namespace dpass
