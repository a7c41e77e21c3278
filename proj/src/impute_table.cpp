#include <set>

#include <fmt/format.h>

#include "cimpute/error.hpp"
#include "cimpute/imputation.hpp"
#include "cimpute/type_inference.hpp"
#include "parallel.hpp"

namespace cimpute {

namespace {

constexpr std::size_t kRowsPerTask = 64;

void check_schema(const Table& table, const ConstraintSet& constraints) {
  const std::size_t ncols = table.column_count();
  if (constraints.datatypes.size() != ncols || constraints.column_constraints.size() != ncols) {
    throw SchemaError(fmt::format("table has {} columns but the constraints describe {}", ncols,
                                  constraints.datatypes.size()));
  }
  for (const auto& a : constraints.associations) {
    if (a.source >= ncols || a.target >= ncols || (a.catcol && *a.catcol >= ncols)) {
      throw SchemaError("association references a column outside the table");
    }
  }
}

}  // namespace

ImputationResult impute_table(const Table& table, const ConstraintSet& constraints, const ImputeOptions& options) {
  check_schema(table, constraints);
  const Table typed = apply_types(table, constraints.datatypes);
  const std::size_t ncols = table.column_count();
  const std::size_t nrows = table.row_count();

  ImputationResult result;
  result.order = build_imputation_order(constraints.datatypes, constraints.associations);
  const Imputer imputer(constraints);

  std::vector<std::vector<ImputationRecord>> per_row(nrows);
  const std::size_t tasks = (nrows + kRowsPerTask - 1) / kRowsPerTask;
  detail::parallel_for(tasks, options.threads, [&](std::size_t task) {
    std::vector<Cell> work(ncols);
    const std::size_t end = std::min(nrows, (task + 1) * kRowsPerTask);
    for (std::size_t r = task * kRowsPerTask; r < end; ++r) {
      for (std::size_t c = 0; c < ncols; ++c) work[c] = typed.at(r, c);
      for (std::size_t c : result.order.columns) {
        if (work[c].is_present() || constraints.datatypes.datatype(c) == DataType::Empty) continue;
        auto imp = imputer.impute(c, work);
        if (!imp) {
          throw SchemaError(fmt::format("no usable constraint for column '{}'", table.column(c).name));
        }
        ImputationRecord rec{r,
                             c,
                             table.column(c).name,
                             imp->value,
                             imp->method,
                             std::move(imp->predictors),
                             imp->error_or_prob,
                             std::move(imp->basis),
                             {}};
        rec.explanation = render_explanation(rec);
        work[c] = rec.value;
        per_row[r].push_back(std::move(rec));
      }
    }
  });

  result.table = table;
  for (auto& records : per_row) {
    for (auto& rec : records) {
      result.table.set(rec.row, rec.column, rec.value);
      result.records.push_back(std::move(rec));
    }
  }
  return result;
}

std::size_t count_unsound_predictors(const Table& original, std::span<const ImputationRecord> records) {
  std::set<std::pair<std::size_t, std::size_t>> imputed;
  std::size_t bad = 0;
  for (const auto& rec : records) {
    for (const auto& p : rec.predictors) {
      const bool ok = p.value.is_present() &&
                      (original.at(rec.row, p.column).is_present() || imputed.contains({rec.row, p.column}));
      bad += ok ? 0 : 1;
    }
    imputed.emplace(rec.row, rec.column);
  }
  return bad;
}

}  // namespace cimpute
