#pragma once

#include <string>

#include "techspace/evaluation.hpp"

namespace techspace {

/// `measure,data_choice,q,captured_fraction`, pooled over all events.
std::string pooled_curves_csv(const EvaluationReport& report);

/// Same layout, averaging each agent's own capture curve.
std::string agent_mean_curves_csv(const EvaluationReport& report);

/// Pooled AUCs laid out with data choices as rows and measures as columns.
/// Only data choices and measures present in the report appear.
std::string auc_table_csv(const EvaluationReport& report);

/// `agent_id,agent_kind,optimal_measure,auc`, one row per included agent.
std::string optima_csv(const EvaluationReport& report);

/// Counts, thresholds and per-measure results. `context` (config, digests,
/// seed) is embedded verbatim under "config".
std::string report_json(const EvaluationReport& report, const std::string& context_json);

}  // namespace techspace
