#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

namespace plantner {

// The five IOB2 tags. The numeric values are the canonical row/column order of
// every confusion matrix and weight matrix in the toolkit.
enum class Label : std::uint8_t {
  O = 0,
  BMaladie = 1,
  IMaladie = 2,
  BRavageur = 3,
  IRavageur = 4,
};

inline constexpr std::size_t kNumLabels = 5;

inline constexpr std::array<Label, kNumLabels> kAllLabels = {
    Label::O, Label::BMaladie, Label::IMaladie, Label::BRavageur,
    Label::IRavageur};

enum class EntityKind : std::uint8_t {
  Maladie = 0,  // disease
  Ravageur = 1, // pest
};

inline constexpr std::size_t kNumEntityKinds = 2;

inline constexpr std::array<EntityKind, kNumEntityKinds> kAllEntityKinds = {
    EntityKind::Maladie, EntityKind::Ravageur};

constexpr std::size_t index_of(Label l) { return static_cast<std::size_t>(l); }
constexpr std::size_t index_of(EntityKind k) {
  return static_cast<std::size_t>(k);
}

constexpr Label label_at(std::size_t index) {
  return kAllLabels.at(index);
}

constexpr bool is_begin(Label l) {
  return l == Label::BMaladie || l == Label::BRavageur;
}
constexpr bool is_inside(Label l) {
  return l == Label::IMaladie || l == Label::IRavageur;
}

// Kind of a B-/I- label; empty for O.
constexpr std::optional<EntityKind> kind_of(Label l) {
  switch (l) {
    case Label::BMaladie:
    case Label::IMaladie:
      return EntityKind::Maladie;
    case Label::BRavageur:
    case Label::IRavageur:
      return EntityKind::Ravageur;
    case Label::O:
      break;
  }
  return std::nullopt;
}

constexpr Label begin_label(EntityKind k) {
  return k == EntityKind::Maladie ? Label::BMaladie : Label::BRavageur;
}
constexpr Label inside_label(EntityKind k) {
  return k == EntityKind::Maladie ? Label::IMaladie : Label::IRavageur;
}

// Spellings used in corpus files: "O", "B-maladie", ...
std::string_view label_name(Label l);
std::optional<Label> parse_label(std::string_view text);

std::string_view kind_name(EntityKind k);  // "maladie" / "ravageur"
std::optional<EntityKind> parse_kind(std::string_view text);

}  // namespace plantner
