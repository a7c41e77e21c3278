#include "cimpute/eval.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include <fmt/format.h>

#include "cimpute/error.hpp"
#include "cimpute/fitting.hpp"
#include "cimpute/imputation.hpp"
#include "parallel.hpp"

namespace cimpute {

namespace {

constexpr int kMaskRetries = 100;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::vector<double> column_numbers(const Table& t, std::size_t c) {
  std::vector<double> out;
  for (const Cell& cell : t.column(c).cells) {
    if (cell.is_numeric()) out.push_back(cell.as_number());
  }
  return out;
}

template <typename Get>
std::optional<double> average(const std::vector<IterationScores>& its, Get get) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& it : its) {
    if (auto v = get(it)) sum += *v, ++n;
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

MethodScores average_scores(const std::vector<IterationScores>& its, MethodScores IterationScores::*method) {
  MethodScores out;
  out.nrmse = average(its, [&](const IterationScores& it) { return (it.*method).nrmse; });
  std::set<std::string> rmse_cols, f1_cols;
  for (const auto& it : its) {
    for (const auto& [k, _] : (it.*method).rmse) rmse_cols.insert(k);
    for (const auto& [k, _] : (it.*method).f1) f1_cols.insert(k);
  }
  auto lookup = [](const std::map<std::string, double>& m, const std::string& k) -> std::optional<double> {
    auto found = m.find(k);
    if (found == m.end()) return std::nullopt;
    return found->second;
  };
  for (const auto& k : rmse_cols) {
    out.rmse[k] = *average(its, [&](const IterationScores& it) { return lookup((it.*method).rmse, k); });
  }
  for (const auto& k : f1_cols) {
    out.f1[k] = *average(its, [&](const IterationScores& it) { return lookup((it.*method).f1, k); });
  }
  return out;
}

MethodScores score(const Table& original, const Table& imputed, const MissingMask& mask, const TypeReport& types) {
  MethodScores s;
  const auto n = nrmse(original, imputed, mask, types);
  s.nrmse = n.value;
  for (std::size_t c = 0; c < types.size(); ++c) {
    const DataType t = types.datatype(c);
    if (is_numeric(t) || t == DataType::CatNum) {
      if (auto v = rmse(original, imputed, mask, c)) s.rmse[types.columns[c].name] = *v;
    }
    if (is_categorical(t)) {
      if (auto v = f1_categorical(original, imputed, mask, c)) s.f1[types.columns[c].name] = *v;
    }
  }
  return s;
}

std::size_t remaining_missing(const Table& t, const TypeReport& types) {
  std::size_t n = 0;
  for (std::size_t c = 0; c < t.column_count(); ++c) {
    if (types.datatype(c) == DataType::Empty) continue;
    for (const Cell& cell : t.column(c).cells) n += cell.is_missing() ? 1 : 0;
  }
  return n;
}

Json scores_json(const MethodScores& s) {
  Json j;
  j["nrmse"] = s.nrmse ? Json(*s.nrmse) : Json(nullptr);
  Json rmse = Json::object();
  for (const auto& [k, v] : s.rmse) rmse[k] = v;
  j["rmse"] = std::move(rmse);
  Json f1 = Json::object();
  for (const auto& [k, v] : s.f1) f1[k] = v;
  j["f1"] = std::move(f1);
  return j;
}

std::string mean_f1_text(const MethodScores& s) {
  if (s.f1.empty()) return "-";
  double sum = 0.0;
  for (const auto& [_, v] : s.f1) sum += v;
  return fmt::format("{:.3f}", sum / static_cast<double>(s.f1.size()));
}

}  // namespace

bool MissingMask::contains(std::size_t row, std::size_t column) const {
  return std::binary_search(positions.begin(), positions.end(), std::pair{row, column});
}

std::uint64_t iteration_seed(std::uint64_t master, std::size_t perc_index, std::size_t iteration) {
  return splitmix64(splitmix64(master ^ (static_cast<std::uint64_t>(perc_index) << 32)) + iteration);
}

std::pair<Table, MissingMask> inject_missing(const Table& table, double perc, std::uint64_t seed) {
  if (!(perc > 0.0 && perc < 100.0)) throw DataError(fmt::format("missing percentage {} is outside (0, 100)", perc));
  if (table.missing_count() != 0) throw DataError("inject_missing expects a table without missing cells");
  const std::size_t ncols = table.column_count();
  const std::size_t total = ncols * table.row_count();
  const auto count = static_cast<std::size_t>(std::llround(perc / 100.0 * static_cast<double>(total)));

  std::vector<std::size_t> cells(total);
  for (int attempt = 0; attempt < kMaskRetries; ++attempt) {
    std::mt19937_64 rng(attempt == 0 ? seed : splitmix64(seed + static_cast<std::uint64_t>(attempt)));
    for (std::size_t i = 0; i < total; ++i) cells[i] = i;
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng() % (total - i));
      std::swap(cells[i], cells[j]);
    }
    MissingMask mask;
    mask.perc = perc;
    mask.seed = seed;
    std::vector<std::size_t> per_column(ncols, 0);
    for (std::size_t i = 0; i < count; ++i) {
      mask.positions.emplace_back(cells[i] / ncols, cells[i] % ncols);
      ++per_column[cells[i] % ncols];
    }
    if (std::any_of(per_column.begin(), per_column.end(), [&](std::size_t n) { return n >= table.row_count(); })) {
      continue;
    }
    std::sort(mask.positions.begin(), mask.positions.end());
    Table masked = table;
    for (const auto& [r, c] : mask.positions) masked.set(r, c, Cell::missing());
    return {std::move(masked), std::move(mask)};
  }
  throw DataError(fmt::format("could not mask {}% of cells without emptying a column", perc));
}

std::optional<double> rmse(const Table& original, const Table& imputed, const MissingMask& mask, std::size_t column) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& [r, c] : mask.positions) {
    if (c != column) continue;
    const Cell& truth = original.at(r, c);
    const Cell& guess = imputed.at(r, c);
    if (!truth.is_numeric() || !guess.is_numeric()) continue;
    const double d = guess.as_number() - truth.as_number();
    sum += d * d;
    ++n;
  }
  if (n == 0) return std::nullopt;
  return std::sqrt(sum / static_cast<double>(n));
}

NrmseResult nrmse(const Table& original, const Table& imputed, const MissingMask& mask, const TypeReport& types) {
  NrmseResult out;
  double sum = 0.0;
  for (std::size_t c = 0; c < types.size(); ++c) {
    const DataType t = types.datatype(c);
    if (!(is_numeric(t) || t == DataType::CatNum)) continue;
    const auto column_rmse = rmse(original, imputed, mask, c);
    if (!column_rmse) continue;
    const double sigma = population_std(column_numbers(original, c));
    if (sigma == 0.0) {
      out.zero_variance.push_back(types.columns[c].name);
      continue;
    }
    out.per_column[types.columns[c].name] = *column_rmse / sigma;
    sum += *column_rmse / sigma;
  }
  if (!out.per_column.empty()) out.value = sum / static_cast<double>(out.per_column.size());
  return out;
}

std::optional<double> f1_categorical(const Table& original, const Table& imputed, const MissingMask& mask,
                                     std::size_t column) {
  struct Counts {
    std::size_t tp = 0, fp = 0, fn = 0;
  };
  std::map<std::string, Counts> classes;
  std::size_t n = 0;
  for (const auto& [r, c] : mask.positions) {
    if (c != column) continue;
    const std::string truth = to_text(original.at(r, c));
    const std::string guess = to_text(imputed.at(r, c));
    ++n;
    if (truth == guess) {
      ++classes[truth].tp;
    } else {
      ++classes[truth].fn;
      ++classes[guess].fp;
    }
  }
  if (n == 0) return std::nullopt;
  double sum = 0.0;
  for (const auto& [_, k] : classes) {
    const double p = k.tp + k.fp > 0 ? static_cast<double>(k.tp) / static_cast<double>(k.tp + k.fp) : 0.0;
    const double r = k.tp + k.fn > 0 ? static_cast<double>(k.tp) / static_cast<double>(k.tp + k.fn) : 0.0;
    sum += p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
  }
  return sum / static_cast<double>(classes.size());
}

Table baseline_impute(const Table& table) {
  ConstraintSet columns_only;
  columns_only.datatypes = infer_all(table);
  columns_only.column_constraints = infer_column_constraints(apply_types(table, columns_only.datatypes),
                                                             columns_only.datatypes);
  return impute_table(table, columns_only).table;
}

Table encode_categorical_text(const Table& table) {
  const TypeReport types = infer_all(table);
  std::vector<Column> columns = table.columns();
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (types.datatype(c) != DataType::CatText) continue;
    std::set<std::string> values;
    for (const Cell& cell : columns[c].cells) {
      if (cell.is_present()) values.insert(to_text(cell));
    }
    for (Cell& cell : columns[c].cells) {
      if (cell.is_missing()) continue;
      const auto rank = std::distance(values.begin(), values.find(to_text(cell)));
      cell = Cell::integer(rank);
    }
    columns[c].datatype.reset();
  }
  return Table(std::move(columns));
}

Table make_polynomial_benchmark(std::size_t rows, std::uint64_t seed, double noise_fraction) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 10.0);
  std::vector<double> x(rows);
  for (auto& v : x) v = uniform(rng);

  using Fn = double (*)(double);
  const std::vector<std::pair<std::string, Fn>> responses{
      {"y1", [](double v) { return 2.0 * v + 3.0; }},
      {"y2", [](double v) { return 0.5 * v * v - 2.0 * v + 1.0; }},
      {"y3", [](double v) { return 0.1 * v * v * v - v * v + 3.0 * v; }},
      {"y4", [](double v) { return -0.3 * v * v + 4.0 * v + 5.0; }},
  };

  std::vector<Column> columns;
  Column base{"x", {}, std::nullopt};
  for (double v : x) base.cells.push_back(Cell::real(v));
  columns.push_back(std::move(base));
  for (const auto& [name, fn] : responses) {
    std::vector<double> clean(rows);
    for (std::size_t i = 0; i < rows; ++i) clean[i] = fn(x[i]);
    const double sd = noise_fraction * population_std(clean);
    std::normal_distribution<double> noise(0.0, sd > 0.0 ? sd : 1.0);
    Column col{name, {}, std::nullopt};
    for (double v : clean) col.cells.push_back(Cell::real(sd > 0.0 ? v + noise(rng) : v));
    columns.push_back(std::move(col));
  }
  return Table(std::move(columns));
}

EvalReport run_experiment(const Table& input, const ExperimentConfig& config, std::string bench) {
  const Table table = config.encode_categories ? encode_categorical_text(input) : input;
  const TypeReport types = infer_all(table);

  EvalReport report;
  report.bench = std::move(bench);
  report.rows = table.row_count();
  report.columns = table.column_count();
  report.iters = config.iters;
  report.seed = config.seed;

  for (std::size_t p = 0; p < config.percs.size(); ++p) {
    PercResult result;
    result.perc = config.percs[p];
    result.iterations.resize(config.iters);
    detail::parallel_for(config.iters, config.threads, [&](std::size_t i) {
      IterationScores& it = result.iterations[i];
      it.seed = iteration_seed(config.seed, p, i);
      auto [masked, mask] = inject_missing(table, result.perc, it.seed);
      it.masked_cells = mask.positions.size();

      InferenceConfig inference = config.inference;
      inference.threads = 1;
      const ConstraintSet constraints = infer_constraints(masked, inference);
      const ImputationResult ours = impute_table(masked, constraints);
      const Table baseline = baseline_impute(masked);

      it.ours = score(table, ours.table, mask, types);
      it.baseline = score(table, baseline, mask, types);
      it.unsound_predictors = count_unsound_predictors(masked, ours.records);
      it.remaining_missing = remaining_missing(ours.table, types);
    });
    result.ours = average_scores(result.iterations, &IterationScores::ours);
    result.baseline = average_scores(result.iterations, &IterationScores::baseline);
    report.results.push_back(std::move(result));
  }
  return report;
}

Json to_json(const EvalReport& report) {
  Json j;
  j["bench"] = report.bench;
  j["rows"] = report.rows;
  j["columns"] = report.columns;
  j["iters"] = report.iters;
  j["seed"] = report.seed;
  Json results = Json::array();
  for (const auto& r : report.results) {
    Json iterations = Json::array();
    for (const auto& it : r.iterations) {
      iterations.push_back(Json{{"seed", it.seed},
                                {"masked_cells", it.masked_cells},
                                {"ours", scores_json(it.ours)},
                                {"baseline", scores_json(it.baseline)},
                                {"unsound_predictors", it.unsound_predictors},
                                {"remaining_missing", it.remaining_missing}});
    }
    results.push_back(Json{{"perc", r.perc},
                           {"ours", scores_json(r.ours)},
                           {"baseline", scores_json(r.baseline)},
                           {"iterations", std::move(iterations)}});
  }
  j["results"] = std::move(results);
  return j;
}

std::string format_report_table(const EvalReport& report) {
  std::string out = fmt::format("{:<14} {:>6}  {:<10} {:>8} {:>8}\n", "bench", "perc", "method", "NRMSE", "F1");
  auto nrmse_text = [](const MethodScores& s) { return s.nrmse ? fmt::format("{:.3f}", *s.nrmse) : std::string("-"); };
  for (const auto& r : report.results) {
    out += fmt::format("{:<14} {:>6g}  {:<10} {:>8} {:>8}\n", report.bench, r.perc, "mean/mode", nrmse_text(r.baseline),
                       mean_f1_text(r.baseline));
    out += fmt::format("{:<14} {:>6g}  {:<10} {:>8} {:>8}\n", report.bench, r.perc, "ours", nrmse_text(r.ours),
                       mean_f1_text(r.ours));
  }
  return out;
}

}  // namespace cimpute
