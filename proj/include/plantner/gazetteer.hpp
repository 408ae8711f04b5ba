#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "plantner/corpus.hpp"
#include "plantner/labels.hpp"

namespace plantner {

// Disease and pest names keyed by their normalized form (see normalize_term).
class HazardLexicon {
 public:
  // Throws IntegrityError if the normalized term is already present with the
  // other kind. Returns false for an empty term.
  bool add(const std::string& term, EntityKind kind);

  std::optional<EntityKind> find(const std::string& normalized) const;
  const std::map<std::string, EntityKind>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  // Word count of the longest term.
  std::size_t max_term_words() const { return max_term_words_; }

 private:
  std::map<std::string, EntityKind> entries_;
  std::size_t max_term_words_ = 0;
};

// One term per line, `#` comment lines and blank lines skipped. Every term that
// appears in both lists is reported in a single IntegrityError.
HazardLexicon load_lexicon(std::istream& diseases, std::istream& pests);
HazardLexicon load_lexicon_files(const std::string& disease_path,
                                 const std::string& pest_path);

// Terms from a single list file, normalized, in file order without duplicates.
std::vector<std::string> read_term_list(std::istream& in);

struct TermMatch {
  std::size_t start_word;
  std::size_t end_word;  // inclusive
  std::string term;
  EntityKind kind;

  bool operator==(const TermMatch&) const = default;
};

std::vector<std::string> normalized_words(const Sentence& sentence);

// Non-overlapping matches of normalized word n-grams. Longer terms are placed
// first; among equal lengths the leftmost wins. Output is ordered by position.
std::vector<TermMatch> match_terms(const Sentence& sentence,
                                   const HazardLexicon& lexicon);

// For every lexicon term, draws up to k of the tweets matching it, uniformly
// without replacement. Tweets picked by several terms appear once. Output is
// sorted by sentence id, so the result does not depend on pool order.
Corpus sample_per_hazard(const Corpus& pool, const HazardLexicon& lexicon,
                         std::size_t k, std::uint64_t seed);

// Rule-based tagger: B-kind on the first word of every match, I-kind on the rest.
std::vector<Label> baseline_tag(const Sentence& sentence,
                                const HazardLexicon& lexicon);

}  // namespace plantner
