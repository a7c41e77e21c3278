#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "cimpute/table.hpp"

namespace cimpute {

/// Inference audit for one column. Counts cover non-missing cells only.
struct ColumnTypeInfo {
  std::string name;
  DataType datatype = DataType::Empty;
  std::size_t n_values = 0;
  std::size_t n_unique = 0;
  /// Uniqueness cutoff max(ln(n_values), 20); the column is categorical when n_unique < threshold.
  double threshold = 20.0;

  friend bool operator==(const ColumnTypeInfo&, const ColumnTypeInfo&) = default;
};

struct TypeReport {
  std::vector<ColumnTypeInfo> columns;

  DataType datatype(std::size_t column) const { return columns.at(column).datatype; }
  std::size_t size() const { return columns.size(); }

  friend bool operator==(const TypeReport&, const TypeReport&) = default;
};

double categorical_threshold(std::size_t n_values);

ColumnTypeInfo profile_column(const Column& column);
DataType infer_datatype(const Column& column);
TypeReport infer_all(const Table& table);

/// Coerces every cell to the representation its column's datatype demands and
/// stamps the datatype on each column. Text-like columns absorb numbers and
/// dates as their canonical text; FLOAT widens integers. Throws SchemaError on
/// a column count/name mismatch or a cell that cannot be represented.
Table apply_types(const Table& table, const TypeReport& report);

}  // namespace cimpute
