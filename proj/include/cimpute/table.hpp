#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cimpute/cell.hpp"

namespace cimpute {

/// Column classification used by inference and imputation.
enum class DataType { Empty, Date, Text, CatText, Numeric, CatNum, Float };

std::string_view to_string(DataType type);
std::optional<DataType> parse_datatype(std::string_view name);

inline bool is_categorical(DataType t) { return t == DataType::CatText || t == DataType::CatNum; }
inline bool is_numeric(DataType t) { return t == DataType::Numeric || t == DataType::Float; }
inline bool is_integral(DataType t) { return t == DataType::Numeric || t == DataType::CatNum; }

struct Column {
  std::string name;
  std::vector<Cell> cells;
  std::optional<DataType> datatype;

  friend bool operator==(const Column&, const Column&) = default;
};

/// Column-major table. Column names are unique and all columns have the same length.
class Table {
 public:
  Table() = default;

  /// Throws DataError on duplicate names or unequal column lengths.
  explicit Table(std::vector<Column> columns);

  std::size_t row_count() const { return row_count_; }
  std::size_t column_count() const { return columns_.size(); }

  const Column& column(std::size_t index) const { return columns_.at(index); }
  const std::vector<Column>& columns() const { return columns_; }
  std::optional<std::size_t> find(std::string_view name) const;

  const Cell& at(std::size_t row, std::size_t column) const { return columns_[column].cells[row]; }
  void set(std::size_t row, std::size_t column, Cell value) {
    columns_.at(column).cells.at(row) = std::move(value);
  }
  void set_datatype(std::size_t column, DataType type) { columns_.at(column).datatype = type; }

  std::size_t missing_count() const;
  std::size_t missing_count(std::size_t column) const;

  friend bool operator==(const Table&, const Table&) = default;

 private:
  std::vector<Column> columns_;
  std::size_t row_count_ = 0;
};

}  // namespace cimpute
