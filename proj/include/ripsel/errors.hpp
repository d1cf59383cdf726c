#pragma once

#include <stdexcept>
#include <string>

namespace ripsel {

// All toolkit errors derive from Error so callers can catch one type.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed table structure: ragged rows, arity mismatches, unknown columns.
struct SchemaError : Error {
  using Error::Error;
};

// A cell that cannot be parsed as the declared kind.
struct ParseError : Error {
  using Error::Error;
};

// A class label outside {0, 1}.
struct LabelError : Error {
  using Error::Error;
};

// Bad configuration value or unreadable config/data path.
struct ConfigError : Error {
  using Error::Error;
};

// Degenerate numeric input: empty column, single-class training set, < 2 rows.
struct DegenerateError : Error {
  using Error::Error;
};

// Iterative numerics failed: eigensolver out of sweeps, non-finite loss.
struct NumericError : Error {
  using Error::Error;
};

}  // namespace ripsel
