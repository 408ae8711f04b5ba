#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "plantner/corpus.hpp"
#include "plantner/labels.hpp"

namespace plantner {

// Rows are gold labels, columns predicted labels, both in Label index order.
struct ConfusionMatrix {
  std::array<std::array<std::uint64_t, kNumLabels>, kNumLabels> counts{};

  void add(Label gold, Label pred) { ++counts[index_of(gold)][index_of(pred)]; }
  void add(const ConfusionMatrix& other);
  std::uint64_t total() const;
  std::uint64_t gold_count(Label l) const;
  std::uint64_t predicted_count(Label l) const;

  bool operator==(const ConfusionMatrix&) const = default;
};

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::uint64_t support = 0;

  bool operator==(const ClassMetrics&) const = default;
};

// P, R and F1 from raw counts; every vanishing denominator yields 0.
ClassMetrics metrics_from_counts(std::uint64_t tp, std::uint64_t fp, std::uint64_t fn);

struct EvalReport {
  ConfusionMatrix confusion;
  std::array<ClassMetrics, kNumLabels> per_label{};
  // Token level with B- and I- pooled per kind.
  std::array<ClassMetrics, kNumEntityKinds> per_entity_class{};
  ClassMetrics micro;
  ClassMetrics macro;
  ClassMetrics weighted;  // all five labels, O included
  ClassMetrics o_excluded_weighted;
  double accuracy = 0.0;

  bool operator==(const EvalReport&) const = default;
};

EvalReport report_from_confusion(const ConfusionMatrix& confusion);

// Per-piece scores; gold and pred must have equal length.
EvalReport token_metrics(const std::vector<Label>& gold, const std::vector<Label>& pred);

// Coherent spans only: a span opens at B-X and runs through the directly
// following I-X; any I without a compatible open span is dropped.
std::vector<EntitySpan> decode_word_entities(const std::vector<Label>& word_labels,
                                             const std::vector<std::string>& words);

// Collapses piece labels to words (first-piece rule) and decodes those.
std::vector<EntitySpan> decode_entities(const std::vector<Label>& piece_labels,
                                        const std::vector<std::size_t>& word_of_piece,
                                        const std::vector<std::string>& words);

struct EntityReport {
  std::array<ClassMetrics, kNumEntityKinds> per_kind{};
  ClassMetrics micro;
};

// Exact (kind, start, end) matching, accumulated over any number of sentences.
class EntityScorer {
 public:
  void add(const std::vector<EntitySpan>& gold, const std::vector<EntitySpan>& pred);
  EntityReport report() const;

 private:
  std::array<std::uint64_t, kNumEntityKinds> tp_{};
  std::array<std::uint64_t, kNumEntityKinds> fp_{};
  std::array<std::uint64_t, kNumEntityKinds> fn_{};
};

EntityReport entity_metrics(const std::vector<EntitySpan>& gold,
                            const std::vector<EntitySpan>& pred);

}  // namespace plantner
