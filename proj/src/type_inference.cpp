#include "cimpute/type_inference.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include <fmt/format.h>

#include "cimpute/error.hpp"

namespace cimpute {

double categorical_threshold(std::size_t n_values) {
  const double log_n = n_values > 0 ? std::log(static_cast<double>(n_values)) : 0.0;
  return std::max(log_n, 20.0);
}

ColumnTypeInfo profile_column(const Column& column) {
  ColumnTypeInfo info;
  info.name = column.name;

  bool any_real = false;
  bool all_numeric = true;
  bool all_integer = true;
  bool all_dates = true;
  std::unordered_set<std::string> unique;
  for (const Cell& cell : column.cells) {
    if (cell.is_missing()) continue;
    ++info.n_values;
    unique.insert(to_text(cell));
    any_real = any_real || cell.is_real();
    all_numeric = all_numeric && cell.is_numeric();
    all_integer = all_integer && cell.is_integer();
    all_dates = all_dates && cell.is_date();
  }
  info.n_unique = unique.size();
  info.threshold = categorical_threshold(info.n_values);

  if (info.n_values == 0) {
    info.datatype = DataType::Empty;
  } else if (any_real && all_numeric) {
    info.datatype = DataType::Float;
  } else if (all_dates) {
    info.datatype = DataType::Date;
  } else if (static_cast<double>(info.n_unique) < info.threshold) {
    info.datatype = all_integer ? DataType::CatNum : DataType::CatText;
  } else {
    info.datatype = all_integer ? DataType::Numeric : DataType::Text;
  }
  return info;
}

DataType infer_datatype(const Column& column) { return profile_column(column).datatype; }

TypeReport infer_all(const Table& table) {
  TypeReport report;
  report.columns.reserve(table.column_count());
  for (const auto& column : table.columns()) report.columns.push_back(profile_column(column));
  return report;
}

namespace {

Cell coerce(const Cell& cell, DataType type, const std::string& column, std::size_t row) {
  if (cell.is_missing()) return cell;
  auto fail = [&] {
    return SchemaError(fmt::format("row {}, column '{}': value '{}' is not valid for {}", row, column,
                                   to_text(cell), to_string(type)));
  };
  switch (type) {
    case DataType::Empty:
      return cell;
    case DataType::Text:
    case DataType::CatText:
      return cell.is_text() ? cell : Cell::text(to_text(cell));
    case DataType::Float:
      if (cell.is_integer()) return Cell::real(static_cast<double>(cell.as_integer()));
      if (cell.is_real()) return cell;
      throw fail();
    case DataType::Numeric:
    case DataType::CatNum:
      if (cell.is_integer()) return cell;
      if (cell.is_real() && std::nearbyint(cell.as_real()) == cell.as_real()) {
        return Cell::integer(static_cast<std::int64_t>(cell.as_real()));
      }
      throw fail();
    case DataType::Date:
      if (cell.is_date()) return cell;
      throw fail();
  }
  return cell;
}

}  // namespace

Table apply_types(const Table& table, const TypeReport& report) {
  if (report.size() != table.column_count()) {
    throw SchemaError(fmt::format("table has {} columns but the type report has {}", table.column_count(),
                                  report.size()));
  }
  std::vector<Column> columns;
  columns.reserve(table.column_count());
  for (std::size_t c = 0; c < table.column_count(); ++c) {
    const Column& src = table.column(c);
    const ColumnTypeInfo& info = report.columns[c];
    if (src.name != info.name) {
      throw SchemaError(fmt::format("column {} is named '{}' but constraints expect '{}'", c + 1, src.name,
                                    info.name));
    }
    Column out{src.name, {}, info.datatype};
    out.cells.reserve(src.cells.size());
    for (std::size_t r = 0; r < src.cells.size(); ++r) {
      out.cells.push_back(coerce(src.cells[r], info.datatype, src.name, r));
    }
    columns.push_back(std::move(out));
  }
  return Table(std::move(columns));
}

}  // namespace cimpute
