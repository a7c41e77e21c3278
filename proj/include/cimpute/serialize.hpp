#pragma once

#include <span>
#include <string>

#include <json.hpp>

#include "cimpute/constraints.hpp"
#include "cimpute/imputation.hpp"
#include "cimpute/type_inference.hpp"

namespace cimpute {

using Json = nlohmann::ordered_json;

inline constexpr int kConstraintFormatVersion = 1;

Json cell_to_json(const Cell& cell);

/// column name -> {datatype, n_values, n_unique, threshold}, in column order.
Json to_json(const TypeReport& report);
TypeReport type_report_from_json(const Json& j);

/// {version, datatypes, column_constraints, associations[]}. Columns are
/// referenced by name; doubles are written with round-trip precision.
Json to_json(const ConstraintSet& set);
/// Throws DataError on a malformed document or unsupported version.
ConstraintSet constraint_set_from_json(const Json& j);

std::string dump_constraints(const ConstraintSet& set);
ConstraintSet parse_constraints(const std::string& text);

/// {row, column, value, method, predictors, error_or_prob, explanation}
Json to_json(const ImputationRecord& record);
/// One compact JSON object per line.
std::string to_jsonl(std::span<const ImputationRecord> records);

Json to_json(const ImputationOrder& order, const TypeReport& types);

}  // namespace cimpute
