#include "cimpute/serialize.hpp"

#include <fmt/format.h>

#include "cimpute/date_format.hpp"
#include "cimpute/error.hpp"

namespace cimpute {

namespace {

std::size_t column_index(const TypeReport& types, const std::string& name) {
  for (std::size_t i = 0; i < types.size(); ++i) {
    if (types.columns[i].name == name) return i;
  }
  throw DataError(fmt::format("constraints reference unknown column '{}'", name));
}

Json distribution_json(const NumericDistribution& d) {
  return Json{{"mean", d.mean}, {"std", d.std}, {"n", d.n}, {"min", d.min}, {"max", d.max}};
}

NumericDistribution distribution_from(const Json& j) {
  return NumericDistribution{j.at("mean").get<double>(), j.at("std").get<double>(), j.at("n").get<std::size_t>(),
                             j.at("min").get<double>(), j.at("max").get<double>()};
}

Json frequency_json(const FrequencyMap& f) {
  Json out = Json::object();
  for (const auto& [k, v] : f) out[k] = v;
  return out;
}

FrequencyMap frequency_from(const Json& j) {
  FrequencyMap f;
  for (const auto& [k, v] : j.items()) f[k] = v.get<std::size_t>();
  return f;
}

Json column_constraint_json(const ColumnConstraint& cc) {
  struct Visitor {
    Json operator()(const EmptyConstraint&) const { return Json{{"kind", "empty"}}; }
    Json operator()(const CategoricalConstraint& c) const {
      return Json{{"kind", "categorical"}, {"frequency", frequency_json(c.frequency)}};
    }
    Json operator()(const NumericConstraint& c) const {
      return Json{{"kind", "numeric"}, {"min", c.min}, {"max", c.max}, {"mean", c.mean},
                  {"dist", distribution_json(c.dist)}};
    }
    Json operator()(const DateConstraint& c) const {
      return Json{{"kind", "date"},
                  {"min", c.min_date},
                  {"max", c.max_date},
                  {"median", c.median_date},
                  {"format", date_format_pattern(c.format_id)}};
    }
  };
  return std::visit(Visitor{}, cc);
}

ColumnConstraint column_constraint_from(const Json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "empty") return EmptyConstraint{};
  if (kind == "categorical") return CategoricalConstraint{frequency_from(j.at("frequency"))};
  if (kind == "numeric") {
    return NumericConstraint{j.at("min").get<double>(), j.at("max").get<double>(), j.at("mean").get<double>(),
                             distribution_from(j.at("dist"))};
  }
  if (kind == "date") {
    return DateConstraint{j.at("min").get<std::int64_t>(), j.at("max").get<std::int64_t>(),
                          j.at("median").get<std::int64_t>(),
                          intern_date_format(j.at("format").get<std::string>())};
  }
  throw DataError(fmt::format("unknown column constraint kind '{}'", kind));
}

Json payload_json(const AssociationPayload& payload) {
  struct Visitor {
    Json operator()(const FrequencyMap& f) const { return Json{{"frequency", frequency_json(f)}}; }
    Json operator()(const NumericDistribution& d) const { return Json{{"distribution", distribution_json(d)}}; }
    Json operator()(const Polynomial& p) const { return Json{{"coefficients", p.coefficients}}; }
    Json operator()(const DateDiff& d) const {
      return Json{{"min_diff", d.min_diff}, {"max_diff", d.max_diff}, {"mean_diff", d.mean_diff}};
    }
  };
  return std::visit(Visitor{}, payload);
}

AssociationPayload payload_from(AssociationKind kind, const Json& j) {
  switch (kind) {
    case AssociationKind::CatCat:
    case AssociationKind::CatText:
      return frequency_from(j.at("frequency"));
    case AssociationKind::CatNum:
      return distribution_from(j.at("distribution"));
    case AssociationKind::NumNum:
    case AssociationKind::CatNumNum:
      return Polynomial{j.at("coefficients").get<std::vector<double>>()};
    case AssociationKind::DateDate:
      return DateDiff{j.at("min_diff").get<std::int64_t>(), j.at("max_diff").get<std::int64_t>(),
                      j.at("mean_diff").get<double>()};
  }
  throw DataError("unknown association kind");
}

}  // namespace

Json cell_to_json(const Cell& cell) {
  if (cell.is_missing()) return nullptr;
  if (cell.is_integer()) return cell.as_integer();
  if (cell.is_real()) return cell.as_real();
  return to_text(cell);
}

Json to_json(const TypeReport& report) {
  Json out = Json::object();
  for (const auto& c : report.columns) {
    out[c.name] = Json{{"datatype", to_string(c.datatype)},
                       {"n_values", c.n_values},
                       {"n_unique", c.n_unique},
                       {"threshold", c.threshold}};
  }
  return out;
}

TypeReport type_report_from_json(const Json& j) {
  TypeReport report;
  for (const auto& [name, info] : j.items()) {
    const auto type_name = info.at("datatype").get<std::string>();
    const auto type = parse_datatype(type_name);
    if (!type) throw DataError(fmt::format("unknown datatype '{}' for column '{}'", type_name, name));
    report.columns.push_back(ColumnTypeInfo{name, *type, info.at("n_values").get<std::size_t>(),
                                            info.at("n_unique").get<std::size_t>(),
                                            info.at("threshold").get<double>()});
  }
  return report;
}

Json to_json(const ConstraintSet& set) {
  Json j;
  j["version"] = kConstraintFormatVersion;
  j["datatypes"] = to_json(set.datatypes);
  Json columns = Json::object();
  for (std::size_t i = 0; i < set.column_constraints.size(); ++i) {
    columns[set.datatypes.columns.at(i).name] = column_constraint_json(set.column_constraints[i]);
  }
  j["column_constraints"] = std::move(columns);
  Json assoc = Json::array();
  const auto& names = set.datatypes.columns;
  for (const auto& a : set.associations) {
    Json item{{"kind", to_string(a.kind)}, {"source", names.at(a.source).name}, {"target", names.at(a.target).name}};
    if (a.src_value) item["src_value"] = *a.src_value;
    if (a.catcol) item["catcol"] = names.at(*a.catcol).name;
    item["payload"] = payload_json(a.payload);
    item["error"] = a.error;
    item["support"] = a.support;
    assoc.push_back(std::move(item));
  }
  j["associations"] = std::move(assoc);
  return j;
}

ConstraintSet constraint_set_from_json(const Json& j) {
  try {
    const int version = j.at("version").get<int>();
    if (version != kConstraintFormatVersion) {
      throw DataError(fmt::format("unsupported constraint file version {}", version));
    }
    ConstraintSet set;
    set.datatypes = type_report_from_json(j.at("datatypes"));
    const Json& columns = j.at("column_constraints");
    for (const auto& info : set.datatypes.columns) {
      set.column_constraints.push_back(column_constraint_from(columns.at(info.name)));
    }
    for (const auto& item : j.at("associations")) {
      const auto kind_name = item.at("kind").get<std::string>();
      const auto kind = parse_association_kind(kind_name);
      if (!kind) throw DataError(fmt::format("unknown association kind '{}'", kind_name));
      Association a;
      a.kind = *kind;
      a.source = column_index(set.datatypes, item.at("source").get<std::string>());
      a.target = column_index(set.datatypes, item.at("target").get<std::string>());
      if (item.contains("src_value")) a.src_value = item["src_value"].get<std::string>();
      if (item.contains("catcol")) a.catcol = column_index(set.datatypes, item["catcol"].get<std::string>());
      a.payload = payload_from(a.kind, item.at("payload"));
      a.error = item.at("error").get<double>();
      a.support = item.at("support").get<std::size_t>();
      const bool needs_value = a.kind == AssociationKind::CatCat || a.kind == AssociationKind::CatNum ||
                               a.kind == AssociationKind::CatText || a.kind == AssociationKind::CatNumNum;
      if (needs_value != a.src_value.has_value() ||
          (a.kind == AssociationKind::CatNumNum) != a.catcol.has_value()) {
        throw DataError(fmt::format("{} association {} -> {} has inconsistent fields", kind_name,
                                    item.at("source").get<std::string>(), item.at("target").get<std::string>()));
      }
      set.associations.push_back(std::move(a));
    }
    return set;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(fmt::format("malformed constraint file: {}", e.what()));
  }
}

std::string dump_constraints(const ConstraintSet& set) { return to_json(set).dump(2) + "\n"; }

ConstraintSet parse_constraints(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(fmt::format("malformed constraint file: {}", e.what()));
  }
  return constraint_set_from_json(j);
}

Json to_json(const ImputationRecord& record) {
  Json preds = Json::array();
  for (const auto& p : record.predictors) preds.push_back(Json{{"column", p.name}, {"value", cell_to_json(p.value)}});
  return Json{{"row", record.row},
              {"column", record.column_name},
              {"value", cell_to_json(record.value)},
              {"method", to_string(record.method)},
              {"predictors", std::move(preds)},
              {"error_or_prob", record.error_or_prob},
              {"explanation", record.explanation}};
}

std::string to_jsonl(std::span<const ImputationRecord> records) {
  std::string out;
  for (const auto& r : records) {
    out += to_json(r).dump();
    out += '\n';
  }
  return out;
}

Json to_json(const ImputationOrder& order, const TypeReport& types) {
  Json cols = Json::array();
  for (std::size_t c : order.columns) cols.push_back(types.columns.at(c).name);
  Json removed = Json::array();
  for (const auto& e : order.removed_edges) {
    removed.push_back(Json{{"source", types.columns.at(e.source).name},
                           {"target", types.columns.at(e.target).name},
                           {"error", e.error}});
  }
  return Json{{"order", std::move(cols)}, {"removed_edges", std::move(removed)}};
}

}  // namespace cimpute
