#include <fmt/format.h>

#include "cimpute/imputation.hpp"

namespace cimpute {

namespace {

std::string show(const Cell& cell) {
  return cell.is_text() ? fmt::format("'{}'", cell.as_text()) : to_text(cell);
}

std::string predictor_list(const std::vector<Predictor>& predictors) {
  std::string out;
  for (const auto& p : predictors) {
    if (!out.empty()) out += " and ";
    out += fmt::format("{}={}", p.name, show(p.value));
  }
  return out;
}

}  // namespace

std::string render_explanation(const ImputationRecord& record) {
  const std::string head = fmt::format("Imputed {}={}", record.column_name, show(record.value));
  const double e = record.error_or_prob;
  switch (record.method) {
    case ImputationMethod::NumNum:
    case ImputationMethod::CatNumNum:
    case ImputationMethod::CatNum:
    case ImputationMethod::DateDate:
      return fmt::format("{} because {} ({}, error {:.4g})", head, predictor_list(record.predictors), record.basis, e);
    case ImputationMethod::NumCat:
      return fmt::format("{} because {} ({})", head, predictor_list(record.predictors), record.basis);
    case ImputationMethod::CatCat:
    case ImputationMethod::CatText:
      return fmt::format("{} because {} ({}, probability {:.4g})", head, predictor_list(record.predictors),
                         record.basis, e);
    case ImputationMethod::ColumnMean:
      return fmt::format("{} using the column mean of {}", head, record.column_name);
    case ImputationMethod::ColumnMedian:
      return fmt::format("{} using the column median of {}", head, record.column_name);
    case ImputationMethod::ColumnMostFrequent:
      return fmt::format("{} using the column mode of {} (probability {:.4g})", head, record.column_name, e);
  }
  return head;
}

}  // namespace cimpute
