#include "alscan/serialize.hpp"

#include <cmath>
#include <fstream>
#include <ostream>

#include "alscan/io.hpp"

namespace alscan {
namespace {

// JSON has no infinities; they are written as strings.
Json number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

double as_number(const Json& v, const char* field) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return parse_double(v.get<std::string>());
  throw FormatError(std::string("field '") + field + "' must be a number");
}

template <typename T>
T required(const Json& doc, const char* field) {
  if (!doc.contains(field)) {
    throw FormatError(std::string("missing field '") + field + "'");
  }
  try {
    return doc.at(field).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw FormatError(std::string("field '") + field + "' has the wrong type");
  }
}

std::optional<double> optional_number(const Json& doc, const char* field) {
  if (!doc.contains(field) || doc.at(field).is_null()) return std::nullopt;
  return as_number(doc.at(field), field);
}

Json interval_json(const Interval& iv) {
  return Json{{"j", iv.start}, {"ell", iv.length}};
}

}  // namespace

Json report_to_json(const ScanReport& report, const std::string& threshold_source) {
  Json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["statistic"] = to_string(report.kind);
  doc["N"] = report.rows;
  doc["T"] = report.cols;
  doc["sidedness"] = to_string(report.sided);
  doc["intervals"] = report.intervals;
  doc["global_value"] = number(report.global_value);
  doc["log_global_value"] = number(report.log_global_value);
  doc["threshold"] = number(report.threshold);
  doc["threshold_source"] = threshold_source;
  doc["reject"] = report.reject;
  if (report.argmax) {
    Json a = interval_json(report.argmax->interval);
    a["r"] = report.argmax->level;
    doc["argmax"] = a;
  } else {
    doc["argmax"] = nullptr;
  }
  return doc;
}

Json model_to_json(const SignalModel& model) {
  Json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["N"] = model.rows;
  doc["T"] = model.cols;
  Json segs = Json::array();
  for (const auto& s : model.segments) {
    Json seg = interval_json(s.interval);
    seg["beta"] = s.beta;
    seg["epsilon"] = s.epsilon;
    seg["tau"] = s.tau;
    if (s.pi) seg["pi"] = *s.pi;
    if (s.zeta) seg["zeta"] = *s.zeta;
    if (s.mu) seg["mu"] = *s.mu;
    if (s.kappa) seg["kappa"] = *s.kappa;
    segs.push_back(std::move(seg));
  }
  doc["segments"] = std::move(segs);
  return doc;
}

SignalModel model_from_json(const Json& doc) {
  if (!doc.is_object()) throw FormatError("model: expected a JSON object");
  SignalModel model;
  model.rows = required<std::size_t>(doc, "N");
  model.cols = required<std::size_t>(doc, "T");
  if (doc.contains("segments")) {
    if (!doc.at("segments").is_array()) {
      throw FormatError("model: 'segments' must be an array");
    }
    for (const auto& s : doc.at("segments")) {
      SegmentSpec seg;
      seg.interval = {required<std::size_t>(s, "j"), required<std::size_t>(s, "ell")};
      seg.beta = optional_number(s, "beta").value_or(seg.beta);
      seg.epsilon = optional_number(s, "epsilon").value_or(0.0);
      seg.tau = optional_number(s, "tau").value_or(0.0);
      seg.pi = optional_number(s, "pi");
      seg.zeta = optional_number(s, "zeta");
      seg.mu = optional_number(s, "mu");
      seg.kappa = optional_number(s, "kappa");
      model.segments.push_back(seg);
    }
  }
  try {
    model.validate();
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
  return model;
}

Json truth_to_json(const Truth& truth) {
  Json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["carriers"] = truth.carriers;
  return doc;
}

Json quantile_table_to_json(const QuantileTable& table) {
  Json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["statistic"] = to_string(table.kind);
  doc["N"] = table.rows;
  doc["T"] = table.cols;
  doc["replicates"] = table.replicates;
  doc["seed"] = table.seed;
  Json q = Json::array();
  for (const auto& p : table.quantiles) {
    q.push_back({{"level", p.level}, {"value", number(p.value)}});
  }
  doc["quantiles"] = std::move(q);
  Json values = Json::array();
  for (double v : table.null_values) values.push_back(number(v));
  doc["null_values"] = std::move(values);
  return doc;
}

QuantileTable quantile_table_from_json(const Json& doc) {
  QuantileTable table;
  table.kind = parse_stat_kind(required<std::string>(doc, "statistic"));
  table.rows = required<std::size_t>(doc, "N");
  table.cols = required<std::size_t>(doc, "T");
  table.replicates = required<std::size_t>(doc, "replicates");
  table.seed = doc.value("seed", std::uint64_t{0});
  if (doc.contains("null_values")) {
    for (const auto& v : doc.at("null_values")) {
      table.null_values.push_back(as_number(v, "null_values"));
    }
  }
  if (doc.contains("quantiles")) {
    for (const auto& q : doc.at("quantiles")) {
      table.quantiles.push_back({as_number(q.at("level"), "level"),
                                 as_number(q.at("value"), "value")});
    }
  }
  return table;
}

double threshold_from_json(const Json& doc, double level) {
  if (doc.contains("threshold")) return as_number(doc.at("threshold"), "threshold");
  const QuantileTable table = quantile_table_from_json(doc);
  for (const auto& q : table.quantiles) {
    if (q.level == level) return q.value;
  }
  if (!table.null_values.empty()) return table.quantile(level);
  throw FormatError("threshold file has no quantile at level " + format_double(level));
}

Json summary_to_json(const MonteCarloSummary& s) {
  Json doc;
  doc["statistic"] = to_string(s.kind);
  doc["threshold"] = number(s.threshold);
  doc["replicates"] = s.replicates;
  doc["type1_rate"] = s.type1_rate;
  doc["type1_se"] = s.type1_se;
  doc["type2_rate"] = s.type2_rate;
  doc["type2_se"] = s.type2_se;
  doc["error_sum"] = s.error_sum();
  doc["error_sum_se"] = s.error_sum_se();
  doc["master_seed"] = s.master_seed;
  doc["h0_seeds"] = s.h0_seeds;
  doc["h1_seeds"] = s.h1_seeds;
  return doc;
}

Json power_to_json(const std::vector<PowerCell>& cells) {
  Json doc;
  doc["schema_version"] = kSchemaVersion;
  Json arr = Json::array();
  for (const auto& c : cells) {
    Json cell;
    cell["N"] = c.rows;
    cell["mu_multiple"] = c.mu_multiple;
    cell["model"] = model_to_json(c.model);
    Json sums = Json::array();
    for (const auto& s : c.summaries) sums.push_back(summary_to_json(s));
    cell["summaries"] = std::move(sums);
    arr.push_back(std::move(cell));
  }
  doc["cells"] = std::move(arr);
  return doc;
}

void write_power_csv(std::ostream& out, const std::vector<PowerCell>& cells) {
  out << "N,mu_multiple,statistic,threshold,replicates,type1_rate,type1_se,"
         "type2_rate,type2_se,error_sum\n";
  for (const auto& c : cells) {
    for (const auto& s : c.summaries) {
      out << c.rows << ',' << format_double(c.mu_multiple) << ',' << to_string(s.kind)
          << ',' << format_double(s.threshold) << ',' << s.replicates << ','
          << format_double(s.type1_rate) << ',' << format_double(s.type1_se) << ','
          << format_double(s.type2_rate) << ',' << format_double(s.type2_se) << ','
          << format_double(s.error_sum()) << '\n';
    }
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError("'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_json_file(const std::string& path, const Json& doc) {
  std::ofstream out(path, std::ios::out | std::ios::trunc);
  if (!out) throw FormatError("cannot open '" + path + "' for writing");
  out << doc.dump(2) << '\n';
}

}  // namespace alscan
