// Reference implementations used only by tests. They follow the rules
// directly, with linear scans and no shared code with the library paths they check.
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "cimpute/constraints.hpp"
#include "cimpute/eval.hpp"

namespace oracle {

inline bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

/// Days since 1970-01-01 by counting whole years and months.
inline std::int64_t days_since_epoch(int year, int month, int day) {
  static const int kMonthDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  std::int64_t days = 0;
  if (year >= 1970) {
    for (int y = 1970; y < year; ++y) days += is_leap(y) ? 366 : 365;
  } else {
    for (int y = year; y < 1970; ++y) days -= is_leap(y) ? 366 : 365;
  }
  for (int m = 1; m < month; ++m) days += kMonthDays[m - 1] + ((m == 2 && is_leap(year)) ? 1 : 0);
  return days + day - 1;
}

/// Solves a square system by Gaussian elimination with partial pivoting.
inline std::vector<double> solve(std::vector<std::vector<double>> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r][col] / a[col][col];
      for (std::size_t k = col; k < n; ++k) a[r][k] -= f * a[col][k];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= a[i][k] * x[k];
    x[i] = s / a[i][i];
  }
  return x;
}

/// Coefficients of the interpolating polynomial through (xs[i], ys[i]).
inline std::vector<double> interpolate(const std::vector<double>& xs, const std::vector<double>& ys) {
  std::vector<std::vector<double>> a(xs.size(), std::vector<double>(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t k = 0; k < xs.size(); ++k) a[i][k] = std::pow(xs[i], static_cast<double>(k));
  }
  return solve(a, ys);
}

inline std::string text(const cimpute::Cell& c) { return cimpute::to_text(c); }

/// Categorical value from numeric cells: every category value seen in a
/// CAT_NUM association sourced at `column` is tried; it scores one vote per
/// observed numeric column whose group range [min, max] contains the value
/// and accumulates |value - group mean|. Most votes, then least distance,
/// then lexicographically first.
inline std::optional<std::string> num_cat(const cimpute::ConstraintSet& cs, std::size_t column,
                                          std::span<const cimpute::Cell> row) {
  using cimpute::AssociationKind;
  std::set<std::string> universe;
  for (const auto& a : cs.associations) {
    if (a.kind == AssociationKind::CatNum && a.source == column) universe.insert(*a.src_value);
  }
  std::optional<std::string> best;
  std::size_t best_votes = 0;
  double best_error = std::numeric_limits<double>::infinity();
  for (const auto& value : universe) {
    std::size_t votes = 0;
    double error = 0.0;
    for (std::size_t t = 0; t < row.size(); ++t) {
      if (!row[t].is_numeric()) continue;
      for (const auto& a : cs.associations) {
        if (a.kind != AssociationKind::CatNum || a.source != column || a.target != t || *a.src_value != value) continue;
        const double x = row[t].as_number();
        const auto& d = a.distribution();
        if (d.min <= x && x <= d.max) {
          ++votes;
          error += std::abs(x - d.mean);
        }
      }
    }
    if (votes == 0) continue;
    if (votes > best_votes || (votes == best_votes && error < best_error)) {
      best = value;
      best_votes = votes;
      best_error = error;
    }
  }
  return best;
}

/// Categorical value from categorical cells: over applicable CAT_CAT
/// associations in list order, the modal target value with the strictly
/// highest relative frequency.
inline std::optional<std::string> cat_cat(const cimpute::ConstraintSet& cs, std::size_t column,
                                          std::span<const cimpute::Cell> row) {
  std::optional<std::string> best;
  double best_prob = 0.0;
  for (const auto& a : cs.associations) {
    if (a.kind != cimpute::AssociationKind::CatCat || a.target != column) continue;
    if (row[a.source].is_missing() || text(row[a.source]) != *a.src_value) continue;
    std::size_t total = 0;
    std::size_t top = 0;
    for (const auto& [_, n] : a.frequency()) total += n;
    std::string modal;
    for (const auto& [v, n] : a.frequency()) {
      if (n > top) top = n, modal = v;
    }
    const double prob = static_cast<double>(top) / static_cast<double>(total);
    if (prob > best_prob) best = modal, best_prob = prob;
  }
  return best;
}

/// NRMSE straight from the formulas: RMSE over the masked cells of each
/// numeric column, divided by the population std of the full original column,
/// averaged over columns with masked cells and nonzero std.
inline std::optional<double> nrmse(const std::vector<std::vector<double>>& original,
                                   const std::vector<std::vector<double>>& imputed,
                                   const std::vector<std::vector<bool>>& masked) {
  double total = 0.0;
  int columns = 0;
  for (std::size_t c = 0; c < original.size(); ++c) {
    const auto& col = original[c];
    double mean = 0.0;
    for (double v : col) mean += v;
    mean /= static_cast<double>(col.size());
    double var = 0.0;
    for (double v : col) var += (v - mean) * (v - mean);
    const double sigma = std::sqrt(var / static_cast<double>(col.size()));
    double sq = 0.0;
    int n = 0;
    for (std::size_t r = 0; r < col.size(); ++r) {
      if (!masked[c][r]) continue;
      sq += (imputed[c][r] - col[r]) * (imputed[c][r] - col[r]);
      ++n;
    }
    if (n == 0 || sigma == 0.0) continue;
    total += std::sqrt(sq / n) / sigma;
    ++columns;
  }
  if (columns == 0) return std::nullopt;
  return total / columns;
}

}  // namespace oracle
