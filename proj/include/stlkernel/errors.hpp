#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stlkernel {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Text does not conform to the formula grammar. Carries the byte offset of
/// the offending token and what the parser expected there.
struct ParseError : Error {
  ParseError(std::size_t offset, const std::string& expected, const std::string& got)
      : Error("syntax error at byte " + std::to_string(offset) + ": expected " + expected +
              ", got " + got),
        offset(offset),
        expected(expected) {}
  std::size_t offset;
  std::string expected;
};

/// A temporal window is empty even after clamping (t + a past the grid end).
struct HorizonError : Error {
  using Error::Error;
};

/// Atom references a signal dimension the trajectory does not have.
struct DimensionError : Error {
  using Error::Error;
};

/// Formula has (numerically) zero self-kernel on the given bank.
struct DegenerateFormulaError : Error {
  using Error::Error;
};

/// A signal dimension has zero variance across the whole bank.
struct DegenerateDimensionError : Error {
  using Error::Error;
};

/// Linear system is not positive definite at the requested ridge strength.
struct ConditioningError : Error {
  using Error::Error;
};

/// Malformed file contents (CSV, JSON models, serialized grams/models).
struct IoError : Error {
  using Error::Error;
};

/// Invalid configuration or parameter values.
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace stlkernel
