#include "cimpute/table.hpp"

#include <algorithm>
#include <array>
#include <unordered_set>

#include <fmt/format.h>

#include "cimpute/error.hpp"

namespace cimpute {

namespace {
constexpr std::array<std::pair<DataType, std::string_view>, 7> kTypeNames{{
    {DataType::Empty, "EMPTY"},
    {DataType::Date, "DATE"},
    {DataType::Text, "TEXT"},
    {DataType::CatText, "CAT_TEXT"},
    {DataType::Numeric, "NUMERIC"},
    {DataType::CatNum, "CAT_NUM"},
    {DataType::Float, "FLOAT"},
}};
}  // namespace

std::string_view to_string(DataType type) {
  for (const auto& [t, name] : kTypeNames) {
    if (t == type) return name;
  }
  return "UNKNOWN";
}

std::optional<DataType> parse_datatype(std::string_view name) {
  for (const auto& [t, n] : kTypeNames) {
    if (n == name) return t;
  }
  return std::nullopt;
}

Table::Table(std::vector<Column> columns) : columns_(std::move(columns)) {
  std::unordered_set<std::string_view> seen;
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (!seen.insert(columns_[i].name).second) {
      throw DataError(fmt::format("duplicate column name '{}' at column {}", columns_[i].name, i + 1));
    }
    if (i == 0) {
      row_count_ = columns_[i].cells.size();
    } else if (columns_[i].cells.size() != row_count_) {
      throw DataError(fmt::format("column '{}' has {} cells, expected {}", columns_[i].name,
                                  columns_[i].cells.size(), row_count_));
    }
  }
}

std::optional<std::size_t> Table::find(std::string_view name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i].name == name) return i;
  }
  return std::nullopt;
}

std::size_t Table::missing_count() const {
  std::size_t n = 0;
  for (const auto& col : columns_) {
    for (const auto& cell : col.cells) n += cell.is_missing() ? 1 : 0;
  }
  return n;
}

std::size_t Table::missing_count(std::size_t column) const {
  const auto& cells = columns_.at(column).cells;
  return static_cast<std::size_t>(std::count_if(cells.begin(), cells.end(), [](const Cell& c) { return c.is_missing(); }));
}

}  // namespace cimpute
