#include "plantner/tokenization.hpp"

#include <fstream>
#include <istream>

#include "plantner/error.hpp"
#include "plantner/text.hpp"

namespace plantner {

Vocab::Vocab(std::unordered_set<std::string> pieces, std::string unk_piece)
    : pieces_(std::move(pieces)), unk_(std::move(unk_piece)) {
  pieces_.insert(unk_);
  for (const auto& p : pieces_) max_piece_bytes_ = std::max(max_piece_bytes_, p.size());
}

bool Vocab::contains(std::string_view piece) const {
  return pieces_.find(std::string(piece)) != pieces_.end();
}

Vocab read_vocab(std::istream& in) {
  std::unordered_set<std::string> pieces;
  std::string unk = "<unk>";
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (first && line.rfind("#unk=", 0) == 0) {
      unk = line.substr(5);
      if (unk.empty()) throw ParseError("empty unknown-piece declaration", 1);
      first = false;
      continue;
    }
    first = false;
    if (line.empty()) continue;
    pieces.insert(line);
  }
  return Vocab(std::move(pieces), std::move(unk));
}

Vocab read_vocab_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open vocab file '" + path + "'");
  return read_vocab(in);
}

std::vector<std::string> wordpiece_tokenize(std::string_view word,
                                            const Vocab& vocab) {
  const auto offsets = code_point_offsets(word);
  const std::size_t n = offsets.size() - 1;
  std::vector<std::string> pieces;
  std::size_t start = 0;
  std::string candidate;
  while (start < n) {
    const std::string_view prefix = start == 0 ? kWordInitialMarker : "";
    std::size_t end = n;
    bool found = false;
    for (; end > start; --end) {
      const std::size_t bytes = offsets[end] - offsets[start];
      if (bytes + prefix.size() > vocab.max_piece_bytes()) continue;
      candidate.assign(prefix);
      candidate.append(word.substr(offsets[start], bytes));
      if (vocab.contains(candidate)) {
        found = true;
        break;
      }
    }
    if (found) {
      pieces.push_back(candidate);
      start = end;
    } else {
      pieces.push_back(vocab.unk());
      ++start;
    }
  }
  return pieces;
}

std::vector<Label> project_labels(const std::vector<Label>& word_labels,
                                  const std::vector<std::size_t>& word_of_piece) {
  std::vector<Label> out;
  out.reserve(word_of_piece.size());
  for (std::size_t w : word_of_piece) {
    if (w >= word_labels.size()) {
      throw ContractError("alignment refers to word " + std::to_string(w) +
                          " of a " + std::to_string(word_labels.size()) +
                          "-word sentence");
    }
    out.push_back(word_labels[w]);
  }
  return out;
}

std::vector<Label> collapse_to_words(const std::vector<Label>& piece_labels,
                                     const std::vector<std::size_t>& word_of_piece) {
  if (piece_labels.size() != word_of_piece.size()) {
    throw ContractError("piece labels and alignment differ in length");
  }
  std::vector<Label> out;
  for (std::size_t p = 0; p < word_of_piece.size(); ++p) {
    if (p == 0 || word_of_piece[p] != word_of_piece[p - 1]) {
      out.push_back(piece_labels[p]);
    }
  }
  return out;
}

namespace {

template <typename PiecesOf>
TokenizedSentence build_tokenized(const Sentence& sentence, std::size_t max_pieces,
                                  PiecesOf&& pieces_of) {
  if (max_pieces < 1) throw ContractError("max_pieces must be at least 1");
  check_sentence_shape(sentence);
  TokenizedSentence ts;
  ts.sentence_id = sentence.id;
  for (std::size_t w = 0; w < sentence.size(); ++w) {
    std::vector<std::string> word_pieces = pieces_of(w);
    if (ts.pieces.size() + word_pieces.size() > max_pieces) {
      if (w == 0) {
        throw SentenceTooLongError("sentence '" + sentence.id + "': first word needs " +
                                   std::to_string(word_pieces.size()) +
                                   " pieces, limit is " + std::to_string(max_pieces));
      }
      ts.truncated = true;
      break;
    }
    for (auto& p : word_pieces) {
      ts.pieces.push_back(std::move(p));
      ts.word_of_piece.push_back(w);
    }
    ts.kept_words = w + 1;
  }
  ts.piece_labels = project_labels(sentence.labels, ts.word_of_piece);
  return ts;
}

}  // namespace

TokenizedSentence tokenize_sentence(const Sentence& sentence, const Vocab& vocab,
                                    std::size_t max_pieces) {
  return build_tokenized(sentence, max_pieces, [&](std::size_t w) {
    return wordpiece_tokenize(sentence.words[w], vocab);
  });
}

TokenizedSentence align_pretokenized(const Sentence& sentence,
                                     std::size_t max_pieces) {
  if (!sentence.has_pieces()) {
    throw ContractError("sentence '" + sentence.id + "' has no piece column");
  }
  return build_tokenized(sentence, max_pieces,
                         [&](std::size_t w) { return sentence.word_pieces[w]; });
}

TokenizedCorpus tokenize_corpus(const Corpus& corpus, const Vocab* vocab,
                                std::size_t max_pieces) {
  TokenizedCorpus out;
  out.sentences.reserve(corpus.size());
  for (const auto& s : corpus.sentences) {
    if (s.has_pieces()) {
      out.sentences.push_back(align_pretokenized(s, max_pieces));
    } else if (vocab) {
      out.sentences.push_back(tokenize_sentence(s, *vocab, max_pieces));
    } else {
      throw ContractError("sentence '" + s.id +
                          "' is not pre-tokenized and no vocab was given");
    }
    if (out.sentences.back().truncated) ++out.truncated_count;
  }
  return out;
}

}  // namespace plantner
