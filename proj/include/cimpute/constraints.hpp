#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cimpute/table.hpp"
#include "cimpute/type_inference.hpp"

namespace cimpute {

/// Category value (canonical cell text) -> occurrence count. Ordered, so
/// iteration and tie-breaking are lexicographic.
using FrequencyMap = std::map<std::string, std::size_t>;

/// Gaussian summary of a sample plus its observed range.
struct NumericDistribution {
  double mean = 0.0;
  double std = 0.0;  // population
  std::size_t n = 0;
  double min = 0.0;
  double max = 0.0;

  double expected_value() const { return mean; }
  bool contains(double v) const { return min <= v && v <= max; }

  friend bool operator==(const NumericDistribution&, const NumericDistribution&) = default;
};

/// coefficients[k] multiplies x^k.
struct Polynomial {
  std::vector<double> coefficients;

  int degree() const { return static_cast<int>(coefficients.size()) - 1; }
  double operator()(double x) const;

  friend bool operator==(const Polynomial&, const Polynomial&) = default;
};

/// Target minus source, in seconds.
struct DateDiff {
  std::int64_t min_diff = 0;
  std::int64_t max_diff = 0;
  double mean_diff = 0.0;

  std::int64_t width() const { return max_diff - min_diff; }

  friend bool operator==(const DateDiff&, const DateDiff&) = default;
};

struct CategoricalConstraint {
  FrequencyMap frequency;
  friend bool operator==(const CategoricalConstraint&, const CategoricalConstraint&) = default;
};

struct NumericConstraint {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  NumericDistribution dist;
  friend bool operator==(const NumericConstraint&, const NumericConstraint&) = default;
};

struct DateConstraint {
  std::int64_t min_date = 0;
  std::int64_t max_date = 0;
  std::int64_t median_date = 0;
  std::size_t format_id = 0;
  friend bool operator==(const DateConstraint&, const DateConstraint&) = default;
};

struct EmptyConstraint {
  friend bool operator==(const EmptyConstraint&, const EmptyConstraint&) = default;
};

/// CAT_NUM, CAT_TEXT and TEXT columns carry a frequency table; NUMERIC and
/// FLOAT carry range and distribution; DATE carries range, median and format.
using ColumnConstraint = std::variant<EmptyConstraint, CategoricalConstraint, NumericConstraint, DateConstraint>;

enum class AssociationKind { CatCat, CatNum, CatText, NumNum, CatNumNum, DateDate };

std::string_view to_string(AssociationKind kind);
std::optional<AssociationKind> parse_association_kind(std::string_view name);

using AssociationPayload = std::variant<FrequencyMap, NumericDistribution, Polynomial, DateDiff>;

/// One cross-column constraint. Errors are dimensionless and comparable within a kind:
///   CAT_CAT, CAT_TEXT     1 - relative frequency of the modal target value
///   CAT_NUM               std(group) / std(target column)
///   NUM_NUM, CAT_NUM_NUM  RMSE of polynomial residuals / std(fitted targets)
///   DATE_DATE             std(differences) / std(target column)
struct Association {
  AssociationKind kind = AssociationKind::CatCat;
  std::size_t source = 0;
  std::size_t target = 0;
  std::optional<std::string> src_value;
  std::optional<std::size_t> catcol;
  AssociationPayload payload;
  double error = 0.0;
  std::size_t support = 0;

  const FrequencyMap& frequency() const { return std::get<FrequencyMap>(payload); }
  const NumericDistribution& distribution() const { return std::get<NumericDistribution>(payload); }
  const Polynomial& polynomial() const { return std::get<Polynomial>(payload); }
  const DateDiff& date_diff() const { return std::get<DateDiff>(payload); }

  friend bool operator==(const Association&, const Association&) = default;
};

struct InferenceConfig {
  int max_degree = 3;
  std::size_t min_support = 3;
  unsigned threads = 1;
};

struct ConstraintSet {
  TypeReport datatypes;
  std::vector<ColumnConstraint> column_constraints;
  std::vector<Association> associations;

  friend bool operator==(const ConstraintSet&, const ConstraintSet&) = default;
};

/// Expects a table already passed through apply_types with `types`.
std::vector<ColumnConstraint> infer_column_constraints(const Table& table, const TypeReport& types);

/// All ordered-pair associations, ordered by (source, target, catcol, src_value).
/// Expects a typed table. Associations fit on fewer than min_support rows are dropped.
std::vector<Association> infer_associations(const Table& table, const TypeReport& types,
                                            const InferenceConfig& config = {});

/// Types, column constraints and associations for a raw (untyped) table.
ConstraintSet infer_constraints(const Table& table, const InferenceConfig& config = {});

/// Cell for category key `key` in a column of type `type` (IntVal for CAT_NUM, text otherwise).
Cell category_cell(std::string_view key, DataType type);

}  // namespace cimpute
