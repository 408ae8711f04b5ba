#include "plantner/json_io.hpp"

#include "plantner/error.hpp"

namespace plantner {

using nlohmann::json;

void to_json(json& j, const ClassMetrics& m) {
  j = json{{"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1},
           {"support", m.support}};
}

void from_json(const json& j, ClassMetrics& m) {
  j.at("precision").get_to(m.precision);
  j.at("recall").get_to(m.recall);
  j.at("f1").get_to(m.f1);
  j.at("support").get_to(m.support);
}

void to_json(json& j, const EvalReport& r) {
  json per_label = json::object();
  for (Label l : kAllLabels) per_label[std::string(label_name(l))] = r.per_label[index_of(l)];
  json per_kind = json::object();
  for (EntityKind k : kAllEntityKinds) {
    per_kind[std::string(kind_name(k))] = r.per_entity_class[index_of(k)];
  }
  j = json{{"confusion", r.confusion.counts},
           {"per_label", per_label},
           {"per_entity_class", per_kind},
           {"micro", r.micro},
           {"macro", r.macro},
           {"weighted", r.weighted},
           {"o_excluded_weighted", r.o_excluded_weighted},
           {"accuracy", r.accuracy}};
}

void from_json(const json& j, EvalReport& r) {
  j.at("confusion").get_to(r.confusion.counts);
  for (Label l : kAllLabels) {
    j.at("per_label").at(std::string(label_name(l))).get_to(r.per_label[index_of(l)]);
  }
  for (EntityKind k : kAllEntityKinds) {
    j.at("per_entity_class")
        .at(std::string(kind_name(k)))
        .get_to(r.per_entity_class[index_of(k)]);
  }
  j.at("micro").get_to(r.micro);
  j.at("macro").get_to(r.macro);
  j.at("weighted").get_to(r.weighted);
  j.at("o_excluded_weighted").get_to(r.o_excluded_weighted);
  j.at("accuracy").get_to(r.accuracy);
}

void to_json(json& j, const EntityReport& r) {
  json per_kind = json::object();
  for (EntityKind k : kAllEntityKinds) {
    per_kind[std::string(kind_name(k))] = r.per_kind[index_of(k)];
  }
  j = json{{"per_kind", per_kind}, {"micro", r.micro}};
}

void to_json(json& j, const RunRecord& r) {
  j = json{{"model_id", r.model_id}, {"fold", r.fold},
           {"size", r.size},         {"epoch", r.epoch},
           {"split", std::string(split_name(r.split))}, {"report", r.report}};
}

void from_json(const json& j, RunRecord& r) {
  j.at("model_id").get_to(r.model_id);
  j.at("fold").get_to(r.fold);
  j.at("size").get_to(r.size);
  j.at("epoch").get_to(r.epoch);
  const auto split = parse_split(j.at("split").get<std::string>());
  if (!split) throw ParseError("unknown split in run record", 0);
  r.split = *split;
  j.at("report").get_to(r.report);
}

void to_json(json& j, const StatsReport& s) {
  json labels = json::object();
  for (Label l : kAllLabels) labels[std::string(label_name(l))] = s.label_counts[index_of(l)];
  json entities = json::object();
  for (EntityKind k : kAllEntityKinds) {
    entities[std::string(kind_name(k))] = s.entity_counts[index_of(k)];
  }
  j = json{{"sentence_count", s.sentence_count},
           {"word_count", s.word_count},
           {"label_counts", labels},
           {"entity_counts", entities}};
}

void to_json(json& j, const EntitySpan& s) {
  j = json{{"kind", std::string(kind_name(s.kind))},
           {"start_word", s.start_word},
           {"end_word", s.end_word},
           {"surface", s.surface}};
}

void to_json(json& j, const TermMatch& m) {
  j = json{{"kind", std::string(kind_name(m.kind))},
           {"start_word", m.start_word},
           {"end_word", m.end_word},
           {"term", m.term}};
}

void to_json(json& j, const MeanStd& m) { j = json{{"mean", m.mean}, {"std", m.std}}; }

void to_json(json& j, const ResultsTable& t) {
  json rows = json::array();
  for (const auto& r : t.rows) {
    rows.push_back({{"model_id", r.model_id},
                    {"size", r.size},
                    {"split", std::string(split_name(r.split))},
                    {"n_folds", r.n_folds},
                    {"weighted_f1", r.weighted_f1},
                    {"maladie_f1", r.maladie_f1},
                    {"ravageur_f1", r.ravageur_f1}});
  }
  json selections = json::array();
  for (const auto& s : t.selections) {
    selections.push_back({{"model_id", s.model_id},
                          {"fold", s.fold},
                          {"size", s.size},
                          {"epoch", s.epoch},
                          {"validation_weighted_f1", s.validation_weighted_f1}});
  }
  j = json{{"rows", rows}, {"selections", selections}, {"warnings", t.warnings}};
}

}  // namespace plantner
