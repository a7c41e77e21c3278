#include "cimpute/constraints.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>

#include "cimpute/fitting.hpp"
#include "parallel.hpp"

namespace cimpute {

namespace {

constexpr std::array<std::pair<AssociationKind, std::string_view>, 6> kKindNames{{
    {AssociationKind::CatCat, "CAT_CAT"},
    {AssociationKind::CatNum, "CAT_NUM"},
    {AssociationKind::CatText, "CAT_TEXT"},
    {AssociationKind::NumNum, "NUM_NUM"},
    {AssociationKind::CatNumNum, "CAT_NUM_NUM"},
    {AssociationKind::DateDate, "DATE_DATE"},
}};

// Per-column views computed once and shared by every pair.
struct ColumnView {
  DataType type = DataType::Empty;
  std::vector<bool> present;
  std::vector<std::string> keys;  // categorical/text columns
  std::vector<double> numbers;    // numeric and date columns (dates as epoch seconds)
  double std = 0.0;
};

ColumnView make_view(const Column& column, DataType type) {
  ColumnView v;
  v.type = type;
  const std::size_t n = column.cells.size();
  v.present.resize(n);
  const bool keyed = is_categorical(type) || type == DataType::Text;
  const bool numeric = is_numeric(type) || type == DataType::Date;
  if (keyed) v.keys.resize(n);
  if (numeric) v.numbers.resize(n);
  std::vector<double> observed;
  for (std::size_t r = 0; r < n; ++r) {
    const Cell& cell = column.cells[r];
    v.present[r] = cell.is_present();
    if (!v.present[r]) continue;
    if (keyed) v.keys[r] = to_text(cell);
    if (numeric) {
      v.numbers[r] = cell.is_date() ? static_cast<double>(cell.as_date().epoch_seconds) : cell.as_number();
      observed.push_back(v.numbers[r]);
    }
  }
  v.std = population_std(observed);
  return v;
}

void frequency_associations(AssociationKind kind, std::size_t s, std::size_t t, const ColumnView& src,
                            const ColumnView& tgt, std::size_t min_support, std::vector<Association>& out) {
  std::map<std::string, FrequencyMap> groups;
  for (std::size_t r = 0; r < src.present.size(); ++r) {
    if (src.present[r] && tgt.present[r]) ++groups[src.keys[r]][tgt.keys[r]];
  }
  for (auto& [value, freq] : groups) {
    std::size_t total = 0;
    std::size_t top = 0;
    for (const auto& [_, count] : freq) {
      total += count;
      top = std::max(top, count);
    }
    if (total < min_support) continue;
    Association a;
    a.kind = kind;
    a.source = s;
    a.target = t;
    a.src_value = value;
    a.error = 1.0 - static_cast<double>(top) / static_cast<double>(total);
    a.support = total;
    a.payload = std::move(freq);
    out.push_back(std::move(a));
  }
}

void cat_num_associations(std::size_t s, std::size_t t, const ColumnView& src, const ColumnView& tgt,
                          std::size_t min_support, std::vector<Association>& out) {
  std::map<std::string, std::vector<double>> groups;
  for (std::size_t r = 0; r < src.present.size(); ++r) {
    if (src.present[r] && tgt.present[r]) groups[src.keys[r]].push_back(tgt.numbers[r]);
  }
  for (const auto& [value, values] : groups) {
    if (values.size() < min_support) continue;
    auto fit = fit_distribution(values, tgt.std);
    Association a;
    a.kind = AssociationKind::CatNum;
    a.source = s;
    a.target = t;
    a.src_value = value;
    a.error = fit.error;
    a.support = values.size();
    a.payload = fit.distribution;
    out.push_back(std::move(a));
  }
}

void polynomial_association(AssociationKind kind, std::size_t s, std::size_t t, std::span<const double> xs,
                            std::span<const double> ys, const InferenceConfig& config,
                            std::optional<std::size_t> catcol, std::optional<std::string> value,
                            std::vector<Association>& out) {
  if (xs.size() < config.min_support) return;
  auto fit = fit_polynomial(xs, ys, config.max_degree);
  if (!fit) return;
  Association a;
  a.kind = kind;
  a.source = s;
  a.target = t;
  a.catcol = catcol;
  a.src_value = std::move(value);
  a.error = fit->error;
  a.support = xs.size();
  a.payload = std::move(fit->polynomial);
  out.push_back(std::move(a));
}

void num_num_associations(std::size_t s, std::size_t t, const std::vector<ColumnView>& views,
                          const InferenceConfig& config, std::vector<Association>& out) {
  const ColumnView& src = views[s];
  const ColumnView& tgt = views[t];
  std::vector<double> xs, ys;
  for (std::size_t r = 0; r < src.present.size(); ++r) {
    if (src.present[r] && tgt.present[r]) {
      xs.push_back(src.numbers[r]);
      ys.push_back(tgt.numbers[r]);
    }
  }
  polynomial_association(AssociationKind::NumNum, s, t, xs, ys, config, std::nullopt, std::nullopt, out);

  for (std::size_t c = 0; c < views.size(); ++c) {
    const ColumnView& cat = views[c];
    if (!is_categorical(cat.type)) continue;
    std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> groups;
    for (std::size_t r = 0; r < src.present.size(); ++r) {
      if (src.present[r] && tgt.present[r] && cat.present[r]) {
        auto& g = groups[cat.keys[r]];
        g.first.push_back(src.numbers[r]);
        g.second.push_back(tgt.numbers[r]);
      }
    }
    for (const auto& [value, pair] : groups) {
      polynomial_association(AssociationKind::CatNumNum, s, t, pair.first, pair.second, config, c, value, out);
    }
  }
}

void date_date_association(std::size_t s, std::size_t t, const ColumnView& src, const ColumnView& tgt,
                           std::size_t min_support, std::vector<Association>& out) {
  std::vector<double> diffs;
  DateDiff dd;
  bool first = true;
  for (std::size_t r = 0; r < src.present.size(); ++r) {
    if (!src.present[r] || !tgt.present[r]) continue;
    const auto diff = static_cast<std::int64_t>(tgt.numbers[r]) - static_cast<std::int64_t>(src.numbers[r]);
    dd.min_diff = first ? diff : std::min(dd.min_diff, diff);
    dd.max_diff = first ? diff : std::max(dd.max_diff, diff);
    first = false;
    diffs.push_back(static_cast<double>(diff));
  }
  if (diffs.size() < min_support) return;
  dd.mean_diff = mean_of(diffs);
  Association a;
  a.kind = AssociationKind::DateDate;
  a.source = s;
  a.target = t;
  a.error = tgt.std > 0.0 ? population_std(diffs) / tgt.std : 0.0;
  a.support = diffs.size();
  a.payload = dd;
  out.push_back(std::move(a));
}

}  // namespace

std::string_view to_string(AssociationKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "UNKNOWN";
}

std::optional<AssociationKind> parse_association_kind(std::string_view name) {
  for (const auto& [k, n] : kKindNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

Cell category_cell(std::string_view key, DataType type) {
  if (type == DataType::CatNum || type == DataType::Numeric) {
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(key.data(), key.data() + key.size(), v);
    if (ec == std::errc{} && p == key.data() + key.size()) return Cell::integer(v);
  }
  return Cell::text(std::string(key));
}

std::vector<ColumnConstraint> infer_column_constraints(const Table& table, const TypeReport& types) {
  std::vector<ColumnConstraint> out;
  out.reserve(table.column_count());
  for (std::size_t c = 0; c < table.column_count(); ++c) {
    const DataType type = types.datatype(c);
    const auto& cells = table.column(c).cells;
    if (type == DataType::Empty) {
      out.emplace_back(EmptyConstraint{});
    } else if (is_categorical(type) || type == DataType::Text) {
      CategoricalConstraint cc;
      for (const Cell& cell : cells) {
        if (cell.is_present()) ++cc.frequency[to_text(cell)];
      }
      out.emplace_back(std::move(cc));
    } else if (is_numeric(type)) {
      std::vector<double> values;
      for (const Cell& cell : cells) {
        if (cell.is_present()) values.push_back(cell.as_number());
      }
      const auto fit = fit_distribution(values, 0.0);
      out.emplace_back(NumericConstraint{fit.distribution.min, fit.distribution.max, fit.distribution.mean,
                                         fit.distribution});
    } else {
      std::vector<std::int64_t> secs;
      std::map<std::size_t, std::size_t> format_counts;
      for (const Cell& cell : cells) {
        if (!cell.is_present()) continue;
        secs.push_back(cell.as_date().epoch_seconds);
        ++format_counts[cell.as_date().format_id];
      }
      std::sort(secs.begin(), secs.end());
      DateConstraint dc;
      dc.min_date = secs.front();
      dc.max_date = secs.back();
      const std::size_t mid = secs.size() / 2;
      if (secs.size() % 2 == 1) {
        dc.median_date = secs[mid];
      } else {
        const std::int64_t lo = secs[mid - 1];
        dc.median_date = lo + (secs[mid] - lo) / 2;
      }
      std::size_t best = 0;
      for (const auto& [id, count] : format_counts) {
        if (count > best) best = count, dc.format_id = id;
      }
      out.emplace_back(dc);
    }
  }
  return out;
}

std::vector<Association> infer_associations(const Table& table, const TypeReport& types,
                                            const InferenceConfig& config) {
  const std::size_t ncols = table.column_count();
  std::vector<ColumnView> views;
  views.reserve(ncols);
  for (std::size_t c = 0; c < ncols; ++c) views.push_back(make_view(table.column(c), types.datatype(c)));

  std::vector<std::vector<Association>> per_source(ncols);
  detail::parallel_for(ncols, config.threads, [&](std::size_t s) {
    auto& out = per_source[s];
    const DataType st = views[s].type;
    for (std::size_t t = 0; t < ncols; ++t) {
      if (t == s) continue;
      const DataType tt = views[t].type;
      if (is_categorical(st)) {
        if (is_categorical(tt)) {
          frequency_associations(AssociationKind::CatCat, s, t, views[s], views[t], config.min_support, out);
        } else if (is_numeric(tt)) {
          cat_num_associations(s, t, views[s], views[t], config.min_support, out);
        } else if (tt == DataType::Text) {
          frequency_associations(AssociationKind::CatText, s, t, views[s], views[t], config.min_support, out);
        }
      } else if (is_numeric(st) && is_numeric(tt)) {
        num_num_associations(s, t, views, config, out);
      } else if (st == DataType::Date && tt == DataType::Date) {
        date_date_association(s, t, views[s], views[t], config.min_support, out);
      }
    }
  });

  std::vector<Association> all;
  for (auto& v : per_source) {
    std::move(v.begin(), v.end(), std::back_inserter(all));
  }
  return all;
}

ConstraintSet infer_constraints(const Table& table, const InferenceConfig& config) {
  ConstraintSet set;
  set.datatypes = infer_all(table);
  const Table typed = apply_types(table, set.datatypes);
  set.column_constraints = infer_column_constraints(typed, set.datatypes);
  set.associations = infer_associations(typed, set.datatypes, config);
  return set;
}

}  // namespace cimpute
