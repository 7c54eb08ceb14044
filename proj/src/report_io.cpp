#include "techspace/report_io.hpp"

#include <algorithm>
#include <set>

#include "json.hpp"
#include "techspace/io.hpp"

namespace techspace {
namespace {

std::string curves_csv(const EvaluationReport& report, bool pooled) {
  std::string out = "measure,data_choice,q,captured_fraction\n";
  for (const auto& m : report.measures) {
    for (const auto& p : pooled ? m.pooled_curve : m.agent_mean_curve) {
      out += std::string(to_string(m.id.measure)) + "," + std::string(to_string(m.id.data)) + "," +
             format_double(p.q) + "," + format_double(p.captured) + "\n";
    }
  }
  return out;
}

}  // namespace

std::string pooled_curves_csv(const EvaluationReport& report) { return curves_csv(report, true); }

std::string agent_mean_curves_csv(const EvaluationReport& report) {
  return curves_csv(report, false);
}

std::string auc_table_csv(const EvaluationReport& report) {
  std::set<DataChoice> rows;
  std::set<MeasureKind> cols;
  for (const auto& m : report.measures) {
    rows.insert(m.id.data);
    cols.insert(m.id.measure);
  }
  std::string out = "data_choice";
  for (MeasureKind c : cols) out += "," + std::string(to_string(c));
  out += "\n";
  for (DataChoice r : rows) {
    out += to_string(r);
    for (MeasureKind c : cols) {
      out += ",";
      auto it = std::find_if(report.measures.begin(), report.measures.end(),
                             [&](const MeasureSummary& m) { return m.id == MeasureId{r, c}; });
      if (it != report.measures.end()) out += format_double(it->pooled_auc);
    }
    out += "\n";
  }
  return out;
}

std::string optima_csv(const EvaluationReport& report) {
  std::string out = "agent_id,agent_kind,optimal_measure,auc\n";
  for (const auto& a : report.agents) {
    out += a.agent.id + "," + std::string(to_string(a.agent.kind)) + "," +
           report.measures[a.optimal].id.id() + "," + format_double(a.aucs[a.optimal]) + "\n";
  }
  return out;
}

std::string report_json(const EvaluationReport& report, const std::string& context_json) {
  nlohmann::ordered_json j;
  j["config"] = nlohmann::ordered_json::parse(context_json);
  j["agent_kind"] = to_string(report.kind);
  j["min_classes"] = report.min_classes;
  j["agents"] = {{"total", report.agents_total},
                 {"below_min_classes", report.agents_below_min_classes},
                 {"without_scorable_events", report.agents_without_events},
                 {"included", report.agents_included}};
  j["events"] = {{"scored", report.events_scored}, {"skipped_first_batch", report.events_skipped}};
  j["measures"] = nlohmann::ordered_json::array();
  for (const auto& m : report.measures) {
    j["measures"].push_back({{"id", m.id.id()},
                             {"data_choice", to_string(m.id.data)},
                             {"measure", to_string(m.id.measure)},
                             {"pooled_auc", m.pooled_auc},
                             {"mean_agent_auc", m.mean_agent_auc},
                             {"optimal_agents", m.optimal_agents},
                             {"proportion", m.proportion}});
  }
  return j.dump(2) + "\n";
}

}  // namespace techspace
