#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cimpute/constraints.hpp"
#include "cimpute/table.hpp"

namespace cimpute {

struct RemovedEdge {
  std::size_t source = 0;
  std::size_t target = 0;
  double error = 0.0;

  friend bool operator==(const RemovedEdge&, const RemovedEdge&) = default;
};

struct ImputationOrder {
  std::vector<std::size_t> columns;
  /// Edges dropped, in removal order, to make the association graph acyclic.
  std::vector<RemovedEdge> removed_edges;

  friend bool operator==(const ImputationOrder&, const ImputationOrder&) = default;
};

/// Association graph (one edge per source/target pair, weighted by the
/// minimum error among its associations), made acyclic by repeatedly deleting
/// the highest-error edge of a detected cycle, then topologically sorted.
/// Ready columns are taken categorical first, then NUMERIC/FLOAT, TEXT, DATE,
/// EMPTY, then by column index.
ImputationOrder build_imputation_order(const TypeReport& types, std::span<const Association> associations);

enum class ImputationMethod {
  NumNum,
  CatNumNum,
  CatNum,
  NumCat,
  CatCat,
  CatText,
  DateDate,
  ColumnMean,
  ColumnMedian,
  ColumnMostFrequent,
};

std::string_view to_string(ImputationMethod method);
bool is_column_fallback(ImputationMethod method);

struct Predictor {
  std::size_t column = 0;
  std::string name;
  Cell value;

  friend bool operator==(const Predictor&, const Predictor&) = default;
};

/// Outcome of one imputer for one cell, before it is placed in a record.
struct Imputation {
  Cell value;
  ImputationMethod method = ImputationMethod::ColumnMean;
  std::vector<Predictor> predictors;
  /// Association error for NUM_NUM, CAT_NUM_NUM, CAT_NUM, DATE_DATE and the
  /// column fallbacks; summed |observed - mean| for NUM_CAT; modal probability
  /// for CAT_CAT, CAT_TEXT and most-frequent.
  double error_or_prob = 0.0;
  /// Short human-readable summary of the constraint used.
  std::string basis;
};

struct ImputationRecord {
  std::size_t row = 0;
  std::size_t column = 0;
  std::string column_name;
  Cell value;
  ImputationMethod method = ImputationMethod::ColumnMean;
  std::vector<Predictor> predictors;
  double error_or_prob = 0.0;
  std::string basis;
  std::string explanation;

  friend bool operator==(const ImputationRecord&, const ImputationRecord&) = default;
};

std::string render_explanation(const ImputationRecord& record);

/// The per-datatype imputers over one constraint set. `row` is the working
/// row: original cells plus anything already imputed in it. Every imputer
/// returns nullopt when no applicable association exists.
class Imputer {
 public:
  /// Keeps a reference to `constraints`; it must outlive the imputer.
  explicit Imputer(const ConstraintSet& constraints);

  std::optional<Imputation> num_num(std::size_t column, std::span<const Cell> row) const;
  std::optional<Imputation> cat_num_num(std::size_t column, std::span<const Cell> row) const;
  std::optional<Imputation> cat_num(std::size_t column, std::span<const Cell> row) const;
  std::optional<Imputation> num_cat(std::size_t column, std::span<const Cell> row) const;
  std::optional<Imputation> cat_cat(std::size_t column, std::span<const Cell> row) const;
  std::optional<Imputation> cat_text(std::size_t column, std::span<const Cell> row) const;
  std::optional<Imputation> date_date(std::size_t column, std::span<const Cell> row) const;

  /// Column-level fallback (mean, most frequent or median). Nullopt for EMPTY columns.
  std::optional<Imputation> column_fallback(std::size_t column) const;

  /// Full cascade for the column's datatype.
  std::optional<Imputation> impute(std::size_t column, std::span<const Cell> row) const;

 private:
  std::optional<Imputation> modal(AssociationKind kind, ImputationMethod method, std::size_t column,
                                  std::span<const Cell> row) const;
  Cell numeric_cell(std::size_t column, double value) const;
  Predictor predictor(std::size_t column, std::span<const Cell> row) const;
  const std::string& name(std::size_t column) const;

  const ConstraintSet& constraints_;
  // by_target_[kind][target] -> association indices in constraint-set order
  std::vector<std::vector<std::vector<std::size_t>>> by_target_;
  // CAT_NUM associations by source column
  std::vector<std::vector<std::size_t>> cat_num_by_source_;
};

struct ImputeOptions {
  unsigned threads = 1;
};

struct ImputationResult {
  Table table;
  std::vector<ImputationRecord> records;
  ImputationOrder order;
};

/// Fills every missing cell of every non-EMPTY column. Records are row-major,
/// and within a row follow the imputation order. Throws SchemaError when the
/// table does not match the constraint set.
ImputationResult impute_table(const Table& table, const ConstraintSet& constraints,
                              const ImputeOptions& options = {});

/// Number of predictors cited by `records` that were missing in `original`
/// and not imputed earlier in the same row.
std::size_t count_unsound_predictors(const Table& original, std::span<const ImputationRecord> records);

}  // namespace cimpute
