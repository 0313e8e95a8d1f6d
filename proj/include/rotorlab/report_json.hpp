#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "rotorlab/circulation.hpp"
#include "rotorlab/delta.hpp"
#include "rotorlab/experiments.hpp"
#include "rotorlab/metrics.hpp"

namespace rotorlab {

// All JSON documents carry a "schema" field so consumers can detect layout
// changes without guessing.

nlohmann::json metrics_json(const MetricsReport& r);
nlohmann::json checks_json(const std::string& instance, const std::vector<CheckResult>& checks);
nlohmann::json suite_json(const SuiteResult& s);
nlohmann::json circulation_json(const Graph& g, const Circulation& c);

std::string trace_csv(const LoadTrace& trace);
std::string delta_summary_csv(const DeltaTable& table);
std::string suite_rows_csv(const std::vector<SuiteRow>& rows);
std::string baseline_csv(const std::vector<BaselineRow>& rows);
std::string checks_csv(const std::vector<CheckResult>& checks);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace rotorlab
