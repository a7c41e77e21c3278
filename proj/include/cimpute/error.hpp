#pragma once

#include <stdexcept>
#include <string>

namespace cimpute {

/// Malformed or inconsistent input data (ragged CSV, duplicate headers, bad constraint file).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Table and constraint set disagree on columns or datatypes.
class SchemaError : public DataError {
 public:
  using DataError::DataError;
};

}  // namespace cimpute
