#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace beltrami {

// Base of everything the library throws on bad input or failed numerics.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Geometry or configuration that violates a documented precondition.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// Input scope the solver does not handle (e.g. cross-sections with holes).
class Unsupported : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t byte_offset)
      : Error(what), byte_offset_(byte_offset) {}
  std::size_t byte_offset() const noexcept { return byte_offset_; }

 private:
  std::size_t byte_offset_;
};

class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace beltrami
