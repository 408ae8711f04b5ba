#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "plantner/corpus.hpp"
#include "plantner/labels.hpp"

namespace plantner {

// Marker carried by the first piece of every word ("_pho ma").
inline constexpr std::string_view kWordInitialMarker = "_";

class Vocab {
 public:
  explicit Vocab(std::unordered_set<std::string> pieces,
                 std::string unk_piece = "<unk>");

  bool contains(std::string_view piece) const;
  const std::string& unk() const { return unk_; }
  std::size_t size() const { return pieces_.size(); }
  // Longest piece in bytes; bounds the greedy search window.
  std::size_t max_piece_bytes() const { return max_piece_bytes_; }

 private:
  std::unordered_set<std::string> pieces_;
  std::string unk_;
  std::size_t max_piece_bytes_ = 0;
};

// One piece per line; an optional first line `#unk=<piece>` names the
// unknown piece. Blank lines are ignored.
Vocab read_vocab(std::istream& in);
Vocab read_vocab_file(const std::string& path);

// Greedy longest-match segmentation. The first piece is looked up with the
// word-initial marker prepended; positions with no matching piece emit the
// unknown piece and advance by one code point.
std::vector<std::string> wordpiece_tokenize(std::string_view word,
                                            const Vocab& vocab);

// Copies each word's label onto every one of its pieces.
std::vector<Label> project_labels(const std::vector<Label>& word_labels,
                                  const std::vector<std::size_t>& word_of_piece);

// Word i takes the label of its first piece.
std::vector<Label> collapse_to_words(const std::vector<Label>& piece_labels,
                                     const std::vector<std::size_t>& word_of_piece);

struct TokenizedSentence {
  std::string sentence_id;
  std::vector<std::string> pieces;
  std::vector<std::size_t> word_of_piece;
  std::vector<Label> piece_labels;
  std::size_t kept_words = 0;
  bool truncated = false;

  std::size_t size() const { return pieces.size(); }
};

// Keeps the longest prefix of whole words whose pieces fit in max_pieces.
// Throws SentenceTooLongError if the first word alone does not fit.
TokenizedSentence tokenize_sentence(const Sentence& sentence, const Vocab& vocab,
                                    std::size_t max_pieces);

// Same truncation rule, but uses the sentence's own piece column.
TokenizedSentence align_pretokenized(const Sentence& sentence,
                                     std::size_t max_pieces);

struct TokenizedCorpus {
  std::vector<TokenizedSentence> sentences;
  std::size_t truncated_count = 0;
};

// Sentences with a piece column use it verbatim; the rest go through
// `vocab`, which may be null only if every sentence is pre-tokenized.
TokenizedCorpus tokenize_corpus(const Corpus& corpus, const Vocab* vocab,
                                std::size_t max_pieces);

inline constexpr std::size_t kDefaultMaxPieces = 128;

}  // namespace plantner
