#pragma once

#include <stdexcept>
#include <string>

namespace hodgejet {

/// Base class for every error raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: a problem file, a polynomial string, a catalog entry.
/// `where` holds a JSON pointer when the input came from a document.
class InputError : public Error {
 public:
  explicit InputError(const std::string& msg, std::string where = {})
      : Error(where.empty() ? msg : where + ": " + msg), where_(std::move(where)) {}
  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

/// Two objects that must share a symbol table, flag shape or size do not.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A series was evaluated at a point where a denominator vanishes.
class PoleError : public Error {
 public:
  using Error::Error;
};

/// A denominator is not a p-adic unit at the requested base point.
class BadReductionError : public Error {
 public:
  using Error::Error;
};

/// A p-adic computation lost every significant digit.
class PrecisionError : public Error {
 public:
  using Error::Error;
};

/// Random sampling failed to find an admissible point.
class SamplingError : public Error {
 public:
  using Error::Error;
};

}  // namespace hodgejet
