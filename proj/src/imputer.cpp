#include <cmath>
#include <limits>
#include <map>
#include <set>

#include <fmt/format.h>

#include "cimpute/imputation.hpp"

namespace cimpute {

namespace {

constexpr std::size_t kKindCount = 6;

std::string quoted(const Cell& cell) {
  return cell.is_text() ? fmt::format("'{}'", cell.as_text()) : to_text(cell);
}

std::string describe_polynomial(const Polynomial& p, std::string_view var) {
  std::string out;
  for (std::size_t k = 0; k < p.coefficients.size(); ++k) {
    const double c = p.coefficients[k];
    if (c == 0.0 && p.coefficients.size() > 1) continue;
    std::string term = fmt::format("{:.6g}", std::abs(c));
    if (k == 1) term += fmt::format("*{}", var);
    if (k > 1) term += fmt::format("*{}^{}", var, k);
    if (out.empty()) {
      out = (c < 0 ? "-" : "") + term;
    } else {
      out += (c < 0 ? " - " : " + ") + term;
    }
  }
  return out.empty() ? "0" : out;
}

std::string days(double seconds) { return fmt::format("{:.6g}", seconds / 86400.0); }

}  // namespace

std::string_view to_string(ImputationMethod method) {
  switch (method) {
    case ImputationMethod::NumNum: return "NUM_NUM";
    case ImputationMethod::CatNumNum: return "CAT_NUM_NUM";
    case ImputationMethod::CatNum: return "CAT_NUM";
    case ImputationMethod::NumCat: return "NUM_CAT";
    case ImputationMethod::CatCat: return "CAT_CAT";
    case ImputationMethod::CatText: return "CAT_TEXT";
    case ImputationMethod::DateDate: return "DATE_DATE";
    case ImputationMethod::ColumnMean: return "COLUMN_MEAN";
    case ImputationMethod::ColumnMedian: return "COLUMN_MEDIAN";
    case ImputationMethod::ColumnMostFrequent: return "COLUMN_MOST_FREQUENT";
  }
  return "UNKNOWN";
}

bool is_column_fallback(ImputationMethod method) {
  return method == ImputationMethod::ColumnMean || method == ImputationMethod::ColumnMedian ||
         method == ImputationMethod::ColumnMostFrequent;
}

Imputer::Imputer(const ConstraintSet& constraints) : constraints_(constraints) {
  const std::size_t ncols = constraints.datatypes.size();
  by_target_.assign(kKindCount, std::vector<std::vector<std::size_t>>(ncols));
  cat_num_by_source_.resize(ncols);
  for (std::size_t i = 0; i < constraints.associations.size(); ++i) {
    const Association& a = constraints.associations[i];
    if (a.target >= ncols || a.source >= ncols) continue;
    by_target_[static_cast<std::size_t>(a.kind)][a.target].push_back(i);
    if (a.kind == AssociationKind::CatNum) cat_num_by_source_[a.source].push_back(i);
  }
}

const std::string& Imputer::name(std::size_t column) const { return constraints_.datatypes.columns[column].name; }

Predictor Imputer::predictor(std::size_t column, std::span<const Cell> row) const {
  return Predictor{column, name(column), row[column]};
}

Cell Imputer::numeric_cell(std::size_t column, double value) const {
  if (is_integral(constraints_.datatypes.datatype(column))) {
    return Cell::integer(static_cast<std::int64_t>(std::llround(value)));
  }
  return Cell::real(value);
}

std::optional<Imputation> Imputer::num_num(std::size_t column, std::span<const Cell> row) const {
  const Association* best = nullptr;
  double min_error = std::numeric_limits<double>::infinity();
  double value = 0.0;
  for (std::size_t i : by_target_[static_cast<std::size_t>(AssociationKind::NumNum)][column]) {
    const Association& a = constraints_.associations[i];
    if (!row[a.source].is_numeric() || !(a.error < min_error)) continue;
    const double v = a.polynomial()(row[a.source].as_number());
    if (!std::isfinite(v)) continue;
    best = &a;
    min_error = a.error;
    value = v;
  }
  if (!best) return std::nullopt;
  return Imputation{numeric_cell(column, value),
                    ImputationMethod::NumNum,
                    {predictor(best->source, row)},
                    best->error,
                    fmt::format("{} ≈ {}", name(column), describe_polynomial(best->polynomial(), name(best->source)))};
}

std::optional<Imputation> Imputer::cat_num_num(std::size_t column, std::span<const Cell> row) const {
  const Association* best = nullptr;
  double min_error = std::numeric_limits<double>::infinity();
  double value = 0.0;
  for (std::size_t i : by_target_[static_cast<std::size_t>(AssociationKind::CatNumNum)][column]) {
    const Association& a = constraints_.associations[i];
    const Cell& cat = row[*a.catcol];
    if (cat.is_missing() || to_text(cat) != *a.src_value) continue;
    if (!row[a.source].is_numeric() || !(a.error < min_error)) continue;
    const double v = a.polynomial()(row[a.source].as_number());
    if (!std::isfinite(v)) continue;
    best = &a;
    min_error = a.error;
    value = v;
  }
  if (!best) return std::nullopt;
  return Imputation{numeric_cell(column, value),
                    ImputationMethod::CatNumNum,
                    {predictor(*best->catcol, row), predictor(best->source, row)},
                    best->error,
                    fmt::format("within {}={}, {} ≈ {}", name(*best->catcol), quoted(row[*best->catcol]),
                                name(column), describe_polynomial(best->polynomial(), name(best->source)))};
}

std::optional<Imputation> Imputer::cat_num(std::size_t column, std::span<const Cell> row) const {
  const Association* best = nullptr;
  double min_error = std::numeric_limits<double>::infinity();
  for (std::size_t i : by_target_[static_cast<std::size_t>(AssociationKind::CatNum)][column]) {
    const Association& a = constraints_.associations[i];
    const Cell& src = row[a.source];
    if (src.is_missing() || to_text(src) != *a.src_value) continue;
    if (a.error < min_error) {
      best = &a;
      min_error = a.error;
    }
  }
  if (!best) return std::nullopt;
  const double mean = best->distribution().expected_value();
  return Imputation{numeric_cell(column, mean),
                    ImputationMethod::CatNum,
                    {predictor(best->source, row)},
                    best->error,
                    fmt::format("group mean {}", format_real(mean))};
}

std::optional<Imputation> Imputer::num_cat(std::size_t column, std::span<const Cell> row) const {
  struct Candidate {
    std::set<std::size_t> columns;
    double error = 0.0;
  };
  std::map<std::string, Candidate> candidates;
  std::set<std::size_t> observed_columns;
  for (std::size_t i : cat_num_by_source_[column]) {
    const Association& a = constraints_.associations[i];
    const Cell& observed = row[a.target];
    if (!observed.is_numeric()) continue;
    observed_columns.insert(a.target);
    const double v = observed.as_number();
    const auto& dist = a.distribution();
    if (!dist.contains(v)) continue;
    auto& cand = candidates[*a.src_value];
    if (cand.columns.insert(a.target).second) cand.error += std::abs(v - dist.expected_value());
  }
  if (candidates.empty()) return std::nullopt;

  const std::pair<const std::string, Candidate>* best = nullptr;
  for (const auto& entry : candidates) {
    if (!best) {
      best = &entry;
      continue;
    }
    const auto votes = entry.second.columns.size();
    const auto best_votes = best->second.columns.size();
    if (votes > best_votes || (votes == best_votes && entry.second.error < best->second.error)) best = &entry;
  }
  const DataType type = constraints_.datatypes.datatype(column);
  Imputation imp;
  imp.value = category_cell(best->first, type);
  imp.method = ImputationMethod::NumCat;
  for (std::size_t c : best->second.columns) imp.predictors.push_back(predictor(c, row));
  imp.error_or_prob = best->second.error;
  imp.basis = fmt::format("inside its group range for {} of {} observed numeric column(s), summed distance to group means {:.4g}",
                          best->second.columns.size(), observed_columns.size(), best->second.error);
  return imp;
}

std::optional<Imputation> Imputer::modal(AssociationKind kind, ImputationMethod method, std::size_t column,
                                         std::span<const Cell> row) const {
  const Association* best = nullptr;
  const std::string* best_value = nullptr;
  double max_prob = 0.0;
  for (std::size_t i : by_target_[static_cast<std::size_t>(kind)][column]) {
    const Association& a = constraints_.associations[i];
    const Cell& src = row[a.source];
    if (src.is_missing() || to_text(src) != *a.src_value) continue;
    const std::string* value = nullptr;
    std::size_t top = 0;
    std::size_t total = 0;
    for (const auto& [v, count] : a.frequency()) {
      total += count;
      if (count > top) top = count, value = &v;
    }
    if (total == 0) continue;
    const double prob = static_cast<double>(top) / static_cast<double>(total);
    if (prob > max_prob) {
      best = &a;
      best_value = value;
      max_prob = prob;
    }
  }
  if (!best) return std::nullopt;
  return Imputation{category_cell(*best_value, constraints_.datatypes.datatype(column)), method,
                    {predictor(best->source, row)}, max_prob, "most frequent co-occurring value"};
}

std::optional<Imputation> Imputer::cat_cat(std::size_t column, std::span<const Cell> row) const {
  return modal(AssociationKind::CatCat, ImputationMethod::CatCat, column, row);
}

std::optional<Imputation> Imputer::cat_text(std::size_t column, std::span<const Cell> row) const {
  return modal(AssociationKind::CatText, ImputationMethod::CatText, column, row);
}

std::optional<Imputation> Imputer::date_date(std::size_t column, std::span<const Cell> row) const {
  const auto* dc = std::get_if<DateConstraint>(&constraints_.column_constraints.at(column));
  const Association* best = nullptr;
  auto min_width = std::numeric_limits<std::int64_t>::max();
  for (std::size_t i : by_target_[static_cast<std::size_t>(AssociationKind::DateDate)][column]) {
    const Association& a = constraints_.associations[i];
    if (!row[a.source].is_date()) continue;
    if (a.date_diff().width() < min_width) {
      best = &a;
      min_width = a.date_diff().width();
    }
  }
  if (!best) return std::nullopt;
  const DateDiff& dd = best->date_diff();
  const DateTime& src = row[best->source].as_date();
  const DateTime value{src.epoch_seconds + std::llround(dd.mean_diff), dc ? dc->format_id : src.format_id};
  return Imputation{Cell::date(value),
                    ImputationMethod::DateDate,
                    {predictor(best->source, row)},
                    best->error,
                    fmt::format("mean difference {} days, observed range [{}, {}] days", days(dd.mean_diff),
                                days(static_cast<double>(dd.min_diff)), days(static_cast<double>(dd.max_diff)))};
}

std::optional<Imputation> Imputer::column_fallback(std::size_t column) const {
  const ColumnConstraint& cc = constraints_.column_constraints.at(column);
  if (const auto* num = std::get_if<NumericConstraint>(&cc)) {
    return Imputation{numeric_cell(column, num->mean), ImputationMethod::ColumnMean, {}, 1.0,
                      fmt::format("column mean {}", format_real(num->mean))};
  }
  if (const auto* cat = std::get_if<CategoricalConstraint>(&cc)) {
    const std::string* value = nullptr;
    std::size_t top = 0;
    std::size_t total = 0;
    for (const auto& [v, count] : cat->frequency) {
      total += count;
      if (count > top) top = count, value = &v;
    }
    if (!value) return std::nullopt;
    return Imputation{category_cell(*value, constraints_.datatypes.datatype(column)),
                      ImputationMethod::ColumnMostFrequent,
                      {},
                      static_cast<double>(top) / static_cast<double>(total),
                      "most frequent value of the column"};
  }
  if (const auto* date = std::get_if<DateConstraint>(&cc)) {
    return Imputation{Cell::date(DateTime{date->median_date, date->format_id}), ImputationMethod::ColumnMedian,
                      {}, 1.0, "median of the column"};
  }
  return std::nullopt;
}

std::optional<Imputation> Imputer::impute(std::size_t column, std::span<const Cell> row) const {
  std::optional<Imputation> v;
  switch (constraints_.datatypes.datatype(column)) {
    case DataType::Numeric:
    case DataType::Float:
      v = num_num(column, row);
      if (!v) v = cat_num_num(column, row);
      if (!v) v = cat_num(column, row);
      break;
    case DataType::CatNum:
    case DataType::CatText:
      v = num_cat(column, row);
      if (!v) v = cat_cat(column, row);
      break;
    case DataType::Text:
      v = cat_text(column, row);
      break;
    case DataType::Date:
      v = date_date(column, row);
      break;
    case DataType::Empty:
      return std::nullopt;
  }
  if (!v) v = column_fallback(column);
  return v;
}

}  // namespace cimpute
