#include "plantner/labels.hpp"

namespace plantner {

namespace {
constexpr std::array<std::string_view, kNumLabels> kLabelNames = {
    "O", "B-maladie", "I-maladie", "B-ravageur", "I-ravageur"};
constexpr std::array<std::string_view, kNumEntityKinds> kKindNames = {
    "maladie", "ravageur"};
}  // namespace

std::string_view label_name(Label l) { return kLabelNames[index_of(l)]; }

std::optional<Label> parse_label(std::string_view text) {
  for (std::size_t i = 0; i < kNumLabels; ++i) {
    if (kLabelNames[i] == text) return kAllLabels[i];
  }
  return std::nullopt;
}

std::string_view kind_name(EntityKind k) { return kKindNames[index_of(k)]; }

std::optional<EntityKind> parse_kind(std::string_view text) {
  for (std::size_t i = 0; i < kNumEntityKinds; ++i) {
    if (kKindNames[i] == text) return kAllEntityKinds[i];
  }
  return std::nullopt;
}

}  // namespace plantner
