#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace parmatch {

// Base class for every error thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File missing, unreadable, or unwritable.
class IOError : public Error {
 public:
  using Error::Error;
};

// Malformed input data (ragged rows, non-numeric cells, NaN/Inf entries).
// The message names the offending row/column.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Two matrices disagree on a shared dimension.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// An operation expected centered unit-norm columns but got raw data.
class NormalizationError : public Error {
 public:
  using Error::Error;
};

// Columns with zero variance where a nondegenerate tuning curve is required.
class DegenerateUnitError : public Error {
 public:
  DegenerateUnitError(const std::string& what, std::vector<int> columns)
      : Error(what), columns_(std::move(columns)) {}

  const std::vector<int>& columns() const { return columns_; }

 private:
  std::vector<int> columns_;
};

// Mass fraction outside [0, 1].
class MassOutOfRange : public Error {
 public:
  using Error::Error;
};

// Regularization grid too short, non-ascending, out of range, or non-uniform
// where a uniform grid is required.
class GridError : public Error {
 public:
  using Error::Error;
};

// The solver produced an internally inconsistent result. This signals a bug
// in the solver, not bad input.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Invalid synthetic-generation configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Precision requested over an empty match.
class EmptyMatchError : public Error {
 public:
  using Error::Error;
};

}  // namespace parmatch
