#pragma once

#include <stdexcept>
#include <string>

namespace stratclass {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Precondition violated by the caller (bad parameter, empty input, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// An exhaustive search would exceed its configured evaluation budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// Malformed file contents (CSV, JSON, DIMACS).
class FormatError : public Error {
 public:
  using Error::Error;
};

/// The requested (classifier, cost) combination has no solver.
class Unsupported : public Error {
 public:
  using Error::Error;
};

}  // namespace stratclass
