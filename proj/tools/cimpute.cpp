// cimpute: infer constraints, impute missing cells, and evaluate imputation quality.
//
//   cimpute infer  --input data.csv --constraints constraints.json
//   cimpute impute --input data.csv --output imputed.csv --explanations records.jsonl
//   cimpute eval   --bench polynomial --perc 5,10,20,30 --iters 5 --seed 42
//
// Exit codes: 0 success, 2 usage error, 3 data error, 4 internal error.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "cimpute/constraints.hpp"
#include "cimpute/csv.hpp"
#include "cimpute/error.hpp"
#include "cimpute/eval.hpp"
#include "cimpute/imputation.hpp"
#include "cimpute/io.hpp"
#include "cimpute/serialize.hpp"
#include "cimpute/version.hpp"

namespace {

using cimpute::Json;

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitInternal = 4;

struct RunConfig {
  std::string input;
  std::string output;
  std::string constraints;
  std::string explanations;
  std::string metadata;
  std::string report_json;
  std::string report_text;
  std::string bench;
  std::string missing_tokens = ",NA,N/A,?,null,NaN";
  std::vector<std::string> date_formats = cimpute::default_date_formats();
  char delimiter = ',';
  int max_degree = 3;
  std::size_t min_support = 3;
  std::vector<double> percs{5.0};
  std::size_t iters = 5;
  std::uint64_t seed = 42;
  std::size_t rows = 1000;
  double noise = 0.02;
  unsigned threads = 1;
  bool encode_categories = false;
};

std::vector<std::string> split_keep_empty(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

cimpute::CsvOptions csv_options(const RunConfig& cfg) {
  cimpute::CsvOptions o;
  o.missing_tokens = split_keep_empty(cfg.missing_tokens, ',');
  o.date_formats = cfg.date_formats;
  o.delimiter = cfg.delimiter;
  return o;
}

cimpute::InferenceConfig inference_config(const RunConfig& cfg) {
  return cimpute::InferenceConfig{cfg.max_degree, cfg.min_support, cfg.threads};
}

Json config_json(const RunConfig& cfg, const std::string& command) {
  return Json{{"command", command},
              {"input", cfg.input},
              {"output", cfg.output},
              {"constraints", cfg.constraints},
              {"explanations", cfg.explanations},
              {"bench", cfg.bench},
              {"missing_tokens", split_keep_empty(cfg.missing_tokens, ',')},
              {"date_formats", cfg.date_formats},
              {"delimiter", std::string(1, cfg.delimiter)},
              {"max_degree", cfg.max_degree},
              {"min_support", cfg.min_support},
              {"percs", cfg.percs},
              {"iters", cfg.iters},
              {"seed", cfg.seed},
              {"rows", cfg.rows},
              {"noise", cfg.noise},
              {"threads", cfg.threads},
              {"encode_categories", cfg.encode_categories}};
}

Json metadata_base(const RunConfig& cfg, const std::string& command) {
  return Json{{"tool", "cimpute"}, {"version", cimpute::kVersion}, {"config", config_json(cfg, command)},
              {"seed", cfg.seed}};
}

Json rule_notes() {
  return Json::array({"CAT_NUM range test uses inclusive bounds min <= v <= max",
                      "DATE fallback uses the column median",
                      "values imputed into NUMERIC/CAT_NUM columns are rounded half away from zero"});
}

void write_json(const std::string& path, const Json& j) {
  if (!path.empty()) cimpute::write_file_atomic(path, j.dump(2) + "\n");
}

int cmd_infer(const RunConfig& cfg) {
  const auto table = cimpute::load_csv_file(cfg.input, csv_options(cfg));
  const auto constraints = cimpute::infer_constraints(table, inference_config(cfg));
  const std::string text = cimpute::dump_constraints(constraints);
  if (cfg.constraints.empty()) {
    std::cout << text;
  } else {
    cimpute::write_file_atomic(cfg.constraints, text);
  }
  Json meta = metadata_base(cfg, "infer");
  meta["rows"] = table.row_count();
  meta["columns"] = table.column_count();
  meta["associations"] = constraints.associations.size();
  write_json(cfg.metadata, meta);
  std::cerr << fmt::format("inferred {} column constraints and {} associations from {} rows\n",
                           constraints.column_constraints.size(), constraints.associations.size(), table.row_count());
  return 0;
}

int cmd_impute(const RunConfig& cfg) {
  const auto options = csv_options(cfg);
  const auto table = cimpute::load_csv_file(cfg.input, options);
  const auto constraints = cfg.constraints.empty() ? cimpute::infer_constraints(table, inference_config(cfg))
                                                   : cimpute::parse_constraints(cimpute::read_file(cfg.constraints));
  const auto result = cimpute::impute_table(table, constraints, {cfg.threads});

  if (cfg.output.empty()) {
    cimpute::write_csv(result.table, std::cout, options);
  } else {
    cimpute::write_csv_file(result.table, cfg.output, options);
  }
  if (!cfg.explanations.empty()) cimpute::write_file_atomic(cfg.explanations, cimpute::to_jsonl(result.records));

  Json meta = metadata_base(cfg, "impute");
  meta["constraints_source"] = cfg.constraints.empty() ? "inferred" : cfg.constraints;
  meta["imputation"] = cimpute::to_json(result.order, constraints.datatypes);
  meta["imputed_cells"] = result.records.size();
  meta["rule_notes"] = rule_notes();
  write_json(cfg.metadata, meta);
  std::cerr << fmt::format("imputed {} cells\n", result.records.size());
  return 0;
}

int cmd_eval(const RunConfig& cfg) {
  cimpute::Table table;
  std::string bench;
  if (cfg.bench == "polynomial") {
    table = cimpute::make_polynomial_benchmark(cfg.rows, cfg.seed, cfg.noise);
    bench = "polynomial";
  } else if (!cfg.bench.empty()) {
    throw CLI::ValidationError("--bench", "unknown benchmark '" + cfg.bench + "'");
  } else if (!cfg.input.empty()) {
    table = cimpute::load_csv_file(cfg.input, csv_options(cfg));
    bench = std::filesystem::path(cfg.input).stem().string();
  } else {
    throw CLI::RequiredError("--input or --bench");
  }

  cimpute::ExperimentConfig ec;
  ec.percs = cfg.percs;
  ec.iters = cfg.iters;
  ec.seed = cfg.seed;
  ec.inference = inference_config(cfg);
  ec.threads = cfg.threads;
  ec.encode_categories = cfg.encode_categories;
  const auto report = cimpute::run_experiment(table, ec, bench);

  const std::string text = cimpute::format_report_table(report);
  std::cout << text;
  if (!cfg.report_text.empty()) cimpute::write_file_atomic(cfg.report_text, text);
  write_json(cfg.report_json, cimpute::to_json(report));
  Json meta = metadata_base(cfg, "eval");
  meta["rows"] = report.rows;
  meta["columns"] = report.columns;
  meta["rule_notes"] = rule_notes();
  write_json(cfg.metadata, meta);
  return 0;
}

void add_common(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--missing-tokens", cfg.missing_tokens, "Comma-separated missing tokens (case-insensitive)")
      ->capture_default_str();
  cmd->add_option("--date-formats", cfg.date_formats, "Date patterns tried in order (%Y %m %d %H %M %S)")
      ->delimiter(';')
      ->capture_default_str();
  cmd->add_option("--delimiter", cfg.delimiter, "CSV field delimiter")->capture_default_str();
  cmd->add_option("--max-degree", cfg.max_degree, "Highest polynomial degree tried")
      ->check(CLI::Range(1, 10))
      ->capture_default_str();
  cmd->add_option("--min-support", cfg.min_support, "Minimum rows behind an association")->capture_default_str();
  cmd->add_option("--threads", cfg.threads, "Worker threads")->check(CLI::Range(1u, 256u))->capture_default_str();
  cmd->add_option("--metadata", cfg.metadata, "Run metadata JSON path");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constraint-based explainable imputation for tabular data"};
  app.set_config("--config", "", "TOML/INI config file; command-line flags take precedence");
  app.set_version_flag("--version", cimpute::kVersion);
  app.require_subcommand(1);

  RunConfig cfg;

  auto* infer = app.add_subcommand("infer", "Infer datatypes, column constraints and associations");
  infer->add_option("--input", cfg.input, "Input CSV")->required();
  infer->add_option("--constraints", cfg.constraints, "Constraint JSON output (stdout when omitted)");
  add_common(infer, cfg);

  auto* impute = app.add_subcommand("impute", "Fill missing cells and explain each imputation");
  impute->add_option("--input", cfg.input, "Input CSV")->required();
  impute->add_option("--output", cfg.output, "Imputed CSV output (stdout when omitted)");
  impute->add_option("--constraints", cfg.constraints, "Pre-built constraint JSON (inferred when omitted)");
  impute->add_option("--explanations", cfg.explanations, "Explanation JSON-lines output");
  add_common(impute, cfg);

  auto* eval = app.add_subcommand("eval", "Mask, impute and score against the mean/mode baseline");
  eval->add_option("--input", cfg.input, "Complete input CSV");
  eval->add_option("--bench", cfg.bench, "Built-in benchmark: polynomial");
  eval->add_option("--rows", cfg.rows, "Rows for the built-in benchmark")->capture_default_str();
  eval->add_option("--noise", cfg.noise, "Benchmark noise as a fraction of response std")->capture_default_str();
  eval->add_option("--perc", cfg.percs, "Missing percentages")->delimiter(',')->capture_default_str();
  eval->add_option("--iters", cfg.iters, "Iterations per percentage")->capture_default_str();
  eval->add_option("--seed", cfg.seed, "Master seed")->capture_default_str();
  eval->add_option("--report-json", cfg.report_json, "Report JSON output");
  eval->add_option("--report-text", cfg.report_text, "Report text table output");
  eval->add_flag("--encode-categories", cfg.encode_categories, "Label-encode CAT_TEXT columns first");
  add_common(eval, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*infer) return cmd_infer(cfg);
    if (*impute) return cmd_impute(cfg);
    if (*eval) return cmd_eval(cfg);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const cimpute::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitUsage;
}
