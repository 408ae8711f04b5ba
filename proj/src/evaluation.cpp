#include "plantner/evaluation.hpp"

#include <algorithm>
#include <tuple>

#include "plantner/error.hpp"
#include "plantner/tokenization.hpp"

namespace plantner {

void ConfusionMatrix::add(const ConfusionMatrix& other) {
  for (std::size_t g = 0; g < kNumLabels; ++g) {
    for (std::size_t p = 0; p < kNumLabels; ++p) counts[g][p] += other.counts[g][p];
  }
}

std::uint64_t ConfusionMatrix::total() const {
  std::uint64_t t = 0;
  for (const auto& row : counts) {
    for (auto c : row) t += c;
  }
  return t;
}

std::uint64_t ConfusionMatrix::gold_count(Label l) const {
  std::uint64_t t = 0;
  for (auto c : counts[index_of(l)]) t += c;
  return t;
}

std::uint64_t ConfusionMatrix::predicted_count(Label l) const {
  std::uint64_t t = 0;
  for (const auto& row : counts) t += row[index_of(l)];
  return t;
}

ClassMetrics metrics_from_counts(std::uint64_t tp, std::uint64_t fp, std::uint64_t fn) {
  ClassMetrics m;
  m.support = tp + fn;
  if (tp + fp > 0) m.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
  if (tp + fn > 0) m.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
  if (m.precision + m.recall > 0) {
    m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
  }
  return m;
}

namespace {

ClassMetrics weighted_average(const std::array<ClassMetrics, kNumLabels>& per_label,
                              std::size_t first) {
  ClassMetrics out;
  for (std::size_t l = first; l < kNumLabels; ++l) out.support += per_label[l].support;
  if (out.support == 0) return out;
  for (std::size_t l = first; l < kNumLabels; ++l) {
    const double w = static_cast<double>(per_label[l].support);
    out.precision += w * per_label[l].precision;
    out.recall += w * per_label[l].recall;
    out.f1 += w * per_label[l].f1;
  }
  const double total = static_cast<double>(out.support);
  out.precision /= total;
  out.recall /= total;
  out.f1 /= total;
  return out;
}

}  // namespace

EvalReport report_from_confusion(const ConfusionMatrix& cm) {
  EvalReport r;
  r.confusion = cm;
  const std::uint64_t total = cm.total();
  std::uint64_t correct = 0;
  for (std::size_t l = 0; l < kNumLabels; ++l) {
    const Label label = label_at(l);
    const std::uint64_t tp = cm.counts[l][l];
    correct += tp;
    r.per_label[l] =
        metrics_from_counts(tp, cm.predicted_count(label) - tp, cm.gold_count(label) - tp);
  }
  for (EntityKind k : kAllEntityKinds) {
    const std::size_t b = index_of(begin_label(k));
    const std::size_t i = index_of(inside_label(k));
    const std::uint64_t tp = cm.counts[b][b] + cm.counts[b][i] + cm.counts[i][b] +
                             cm.counts[i][i];
    const std::uint64_t pred = cm.predicted_count(begin_label(k)) +
                               cm.predicted_count(inside_label(k));
    const std::uint64_t gold = cm.gold_count(begin_label(k)) + cm.gold_count(inside_label(k));
    r.per_entity_class[index_of(k)] = metrics_from_counts(tp, pred - tp, gold - tp);
  }
  r.micro = metrics_from_counts(correct, total - correct, total - correct);
  r.accuracy = total ? static_cast<double>(correct) / static_cast<double>(total) : 0.0;
  r.macro.support = total;
  for (const auto& m : r.per_label) {
    r.macro.precision += m.precision / kNumLabels;
    r.macro.recall += m.recall / kNumLabels;
    r.macro.f1 += m.f1 / kNumLabels;
  }
  r.weighted = weighted_average(r.per_label, 0);
  r.o_excluded_weighted = weighted_average(r.per_label, 1);
  return r;
}

EvalReport token_metrics(const std::vector<Label>& gold, const std::vector<Label>& pred) {
  if (gold.size() != pred.size()) {
    throw ContractError("token_metrics: " + std::to_string(gold.size()) + " gold vs " +
                        std::to_string(pred.size()) + " predicted labels");
  }
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < gold.size(); ++i) cm.add(gold[i], pred[i]);
  return report_from_confusion(cm);
}

std::vector<EntitySpan> decode_word_entities(const std::vector<Label>& labels,
                                             const std::vector<std::string>& words) {
  std::vector<EntitySpan> spans;
  auto surface = [&](std::size_t a, std::size_t b) {
    std::string s;
    for (std::size_t i = a; i <= b && i < words.size(); ++i) {
      if (i > a) s += ' ';
      s += words[i];
    }
    return s;
  };
  std::size_t i = 0;
  while (i < labels.size()) {
    if (!is_begin(labels[i])) {
      ++i;
      continue;
    }
    const EntityKind kind = *kind_of(labels[i]);
    std::size_t end = i;
    while (end + 1 < labels.size() && labels[end + 1] == inside_label(kind)) ++end;
    spans.push_back({kind, i, end, surface(i, end)});
    i = end + 1;
  }
  return spans;
}

std::vector<EntitySpan> decode_entities(const std::vector<Label>& piece_labels,
                                        const std::vector<std::size_t>& word_of_piece,
                                        const std::vector<std::string>& words) {
  return decode_word_entities(collapse_to_words(piece_labels, word_of_piece), words);
}

void EntityScorer::add(const std::vector<EntitySpan>& gold,
                       const std::vector<EntitySpan>& pred) {
  using Key = std::tuple<std::size_t, std::size_t, std::size_t>;
  auto keys = [](const std::vector<EntitySpan>& spans) {
    std::vector<Key> k;
    for (const auto& s : spans) k.emplace_back(index_of(s.kind), s.start_word, s.end_word);
    std::sort(k.begin(), k.end());
    return k;
  };
  const auto g = keys(gold);
  const auto p = keys(pred);
  std::vector<Key> common;
  std::set_intersection(g.begin(), g.end(), p.begin(), p.end(), std::back_inserter(common));
  for (const auto& [kind, start, end] : common) ++tp_[kind];
  for (const auto& [kind, start, end] : p) ++fp_[kind];
  for (const auto& [kind, start, end] : g) ++fn_[kind];
  for (const auto& [kind, start, end] : common) {
    --fp_[kind];
    --fn_[kind];
  }
}

EntityReport EntityScorer::report() const {
  EntityReport r;
  std::uint64_t tp = 0, fp = 0, fn = 0;
  for (std::size_t k = 0; k < kNumEntityKinds; ++k) {
    r.per_kind[k] = metrics_from_counts(tp_[k], fp_[k], fn_[k]);
    tp += tp_[k];
    fp += fp_[k];
    fn += fn_[k];
  }
  r.micro = metrics_from_counts(tp, fp, fn);
  return r;
}

EntityReport entity_metrics(const std::vector<EntitySpan>& gold,
                            const std::vector<EntitySpan>& pred) {
  EntityScorer scorer;
  scorer.add(gold, pred);
  return scorer.report();
}

}  // namespace plantner
