#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "alscan/gof.hpp"
#include "alscan/sim.hpp"

namespace alscan {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Global fields of a report. `threshold_source` records where the
/// threshold came from (e.g. "lemma", "value", "file:PATH").
Json report_to_json(const ScanReport& report, const std::string& threshold_source);

Json model_to_json(const SignalModel& model);
/// Throws FormatError on missing or mistyped fields.
SignalModel model_from_json(const Json& doc);

Json truth_to_json(const Truth& truth);

Json quantile_table_to_json(const QuantileTable& table);
QuantileTable quantile_table_from_json(const Json& doc);

/// Threshold from a file: either {"threshold": x} or a quantile table, in
/// which case the quantile at `level` is used (recomputed from the stored
/// null values when the level was not tabulated).
double threshold_from_json(const Json& doc, double level);

Json summary_to_json(const MonteCarloSummary& summary);
Json power_to_json(const std::vector<PowerCell>& cells);
/// One row per (N, multiple, statistic).
void write_power_csv(std::ostream& out, const std::vector<PowerCell>& cells);

Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& doc);

}  // namespace alscan
