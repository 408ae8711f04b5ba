#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "plantner/labels.hpp"

namespace plantner {

// One tweet, pre-tokenized into words, with one gold (or predicted) label per
// word. `word_pieces` is either empty or holds, for every word, the wordpiece
// list supplied by an external tokenizer (third TSV column).
struct Sentence {
  std::string id;
  std::vector<std::string> words;
  std::vector<Label> labels;
  std::vector<std::vector<std::string>> word_pieces;
  std::optional<std::string> raw_text;

  std::size_t size() const { return words.size(); }
  bool has_pieces() const { return !word_pieces.empty(); }

  bool operator==(const Sentence&) const = default;
};

struct Corpus {
  std::vector<Sentence> sentences;
  std::string source;

  std::size_t size() const { return sentences.size(); }
  bool empty() const { return sentences.empty(); }

  // Provenance is not serialized, so equality looks at sentences only.
  bool operator==(const Corpus& other) const {
    return sentences == other.sentences;
  }
};

// Inclusive word range [start_word, end_word].
struct EntitySpan {
  EntityKind kind;
  std::size_t start_word;
  std::size_t end_word;
  std::string surface;

  bool operator==(const EntitySpan&) const = default;
};

struct Violation {
  std::size_t position;  // 0-based label index
  std::string reason;

  bool operator==(const Violation&) const = default;
};

// Every I-X must directly follow B-X or I-X of the same kind.
std::vector<Violation> validate_iob2(const std::vector<Label>& labels);

// Throws ContractError unless the structural sentence invariants hold
// (matching lengths, at least one word, no empty word, piece lists
// consistent). IOB2 validity is checked separately.
void check_sentence_shape(const Sentence& sentence);

struct ReadOptions {
  // Reject gold data whose labels are not valid IOB2.
  bool strict_iob2 = true;
  std::string source;
};

// Result of parsing that keeps the 1-based line number of every sentence
// header, so diagnostics can point at word lines (header_line + 1 + word).
struct ParsedCorpus {
  Corpus corpus;
  std::vector<std::size_t> header_lines;
};

// Corpus TSV: a header line with the sentence id, one `word<TAB>label`
// (optionally `<TAB>piece piece ...`) line per word, one blank line.
ParsedCorpus parse_corpus(std::istream& in, const ReadOptions& options = {});
Corpus read_corpus(std::istream& in, const ReadOptions& options = {});
Corpus read_corpus_file(const std::string& path,
                        const ReadOptions& options = {});

void write_corpus(std::ostream& out, const Corpus& corpus);
std::string write_corpus_string(const Corpus& corpus);
void write_corpus_file(const std::string& path, const Corpus& corpus);

// Raw tweets, one JSON object per line with string fields `id` and `text`.
// Text is whitespace-split into words, labelled O, and kept as raw_text.
Corpus read_tweets_jsonl(std::istream& in, const std::string& source = {});

struct StatsReport {
  std::array<std::size_t, kNumLabels> label_counts{};
  std::array<std::size_t, kNumEntityKinds> entity_counts{};
  std::size_t sentence_count = 0;
  std::size_t word_count = 0;

  bool operator==(const StatsReport&) const = default;
};

StatsReport corpus_stats(const Corpus& corpus);

}  // namespace plantner
