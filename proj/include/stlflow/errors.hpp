#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stlflow {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Raised by the STL text parser; carries the byte offset of the problem.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " (at position " + std::to_string(position) + ")"),
        position_(position) {}

  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Raised when a formula cannot be normalized or grounded as requested.
class SemanticError : public Error {
 public:
  using Error::Error;
};

/// Raised by encoders and model assembly on malformed inputs.
class EncodeError : public Error {
 public:
  using Error::Error;
};

/// Raised by the LP/B&B engine on internal failures (not on infeasibility,
/// which is a regular solution status).
class SolveError : public Error {
 public:
  using Error::Error;
};

}  // namespace stlflow
