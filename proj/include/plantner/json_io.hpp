#pragma once

#include <json.hpp>

#include "plantner/corpus.hpp"
#include "plantner/evaluation.hpp"
#include "plantner/experiment.hpp"
#include "plantner/gazetteer.hpp"

namespace plantner {

void to_json(nlohmann::json& j, const ClassMetrics& m);
void from_json(const nlohmann::json& j, ClassMetrics& m);
void to_json(nlohmann::json& j, const EvalReport& r);
void from_json(const nlohmann::json& j, EvalReport& r);
void to_json(nlohmann::json& j, const EntityReport& r);
void to_json(nlohmann::json& j, const RunRecord& r);
void from_json(const nlohmann::json& j, RunRecord& r);
void to_json(nlohmann::json& j, const StatsReport& s);
void to_json(nlohmann::json& j, const EntitySpan& s);
void to_json(nlohmann::json& j, const TermMatch& m);
void to_json(nlohmann::json& j, const MeanStd& m);
void to_json(nlohmann::json& j, const ResultsTable& t);

}  // namespace plantner
