#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cimpute/constraints.hpp"
#include "cimpute/serialize.hpp"
#include "cimpute/table.hpp"
#include "cimpute/type_inference.hpp"

namespace cimpute {

/// Cells hidden for scoring, sorted row-major.
struct MissingMask {
  std::vector<std::pair<std::size_t, std::size_t>> positions;
  double perc = 0.0;
  std::uint64_t seed = 0;

  bool contains(std::size_t row, std::size_t column) const;
};

/// Blanks round(perc/100 * rows * cols) uniformly chosen cells. Draws that
/// would empty a whole column are retried with a derived seed; throws
/// DataError after repeated failures, on an input that already has missing
/// cells, or on perc outside (0, 100).
std::pair<Table, MissingMask> inject_missing(const Table& table, double perc, std::uint64_t seed);

/// RMSE over the masked cells of one column; nullopt when none are masked.
std::optional<double> rmse(const Table& original, const Table& imputed, const MissingMask& mask,
                           std::size_t column);

struct NrmseResult {
  /// Mean of RMSE_c / sigma_c over scored columns; nullopt when none qualify.
  std::optional<double> value;
  std::map<std::string, double> per_column;
  /// Numeric columns skipped because sigma_c = 0.
  std::vector<std::string> zero_variance;
};

/// Scores NUMERIC, CAT_NUM and FLOAT columns (per `types`) that have masked
/// cells. sigma_c is the population std of the full original column.
NrmseResult nrmse(const Table& original, const Table& imputed, const MissingMask& mask, const TypeReport& types);

/// Macro F1 over the masked cells of a column, classes being the union of
/// true and imputed labels. nullopt when nothing in the column is masked.
std::optional<double> f1_categorical(const Table& original, const Table& imputed, const MissingMask& mask,
                                     std::size_t column);

/// Mean (rounded for integer columns), mode, or median per column.
Table baseline_impute(const Table& table);

/// Replaces CAT_TEXT values by their rank among the column's sorted distinct values.
Table encode_categorical_text(const Table& table);

/// Base column x ~ U(0, 10) and four polynomial responses of it, each with
/// Gaussian noise of std noise_fraction * std(response).
Table make_polynomial_benchmark(std::size_t rows, std::uint64_t seed, double noise_fraction = 0.02);

struct MethodScores {
  std::optional<double> nrmse;
  std::map<std::string, double> rmse;
  std::map<std::string, double> f1;
};

struct IterationScores {
  std::uint64_t seed = 0;
  std::size_t masked_cells = 0;
  MethodScores ours;
  MethodScores baseline;
  std::size_t unsound_predictors = 0;
  std::size_t remaining_missing = 0;
};

struct PercResult {
  double perc = 0.0;
  MethodScores ours;      // averaged over iterations
  MethodScores baseline;  // averaged over iterations
  std::vector<IterationScores> iterations;
};

struct ExperimentConfig {
  std::vector<double> percs{5.0};
  std::size_t iters = 5;
  std::uint64_t seed = 42;
  InferenceConfig inference;
  unsigned threads = 1;
  bool encode_categories = false;
};

struct EvalReport {
  std::string bench;
  std::size_t rows = 0;
  std::size_t columns = 0;
  std::size_t iters = 0;
  std::uint64_t seed = 0;
  std::vector<PercResult> results;
};

/// For each perc and iteration: mask, infer constraints on the masked table,
/// impute with the engine and the baseline, score. Metrics are plain means
/// over the iterations that produced them.
EvalReport run_experiment(const Table& table, const ExperimentConfig& config, std::string bench = "input");

/// Per-iteration seed, independent of scheduling.
std::uint64_t iteration_seed(std::uint64_t master, std::size_t perc_index, std::size_t iteration);

Json to_json(const EvalReport& report);
/// Aligned columns: bench, perc, method, NRMSE, F1.
std::string format_report_table(const EvalReport& report);

}  // namespace cimpute
