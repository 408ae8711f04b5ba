#include "plantner/corpus.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "plantner/error.hpp"
#include "plantner/text.hpp"

namespace plantner {

std::vector<Violation> validate_iob2(const std::vector<Label>& labels) {
  std::vector<Violation> violations;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!is_inside(labels[i])) continue;
    if (i == 0 || labels[i - 1] == Label::O) {
      violations.push_back({i, std::string(label_name(labels[i])) +
                                   " without a preceding B/I of the same kind"});
    } else if (kind_of(labels[i - 1]) != kind_of(labels[i])) {
      violations.push_back(
          {i, "kind mismatch: " + std::string(label_name(labels[i])) +
                  " follows " + std::string(label_name(labels[i - 1]))});
    }
  }
  return violations;
}

void check_sentence_shape(const Sentence& s) {
  if (s.words.empty()) {
    throw ContractError("sentence '" + s.id + "' has no words");
  }
  if (s.words.size() != s.labels.size()) {
    throw ContractError("sentence '" + s.id + "' has " +
                        std::to_string(s.words.size()) + " words but " +
                        std::to_string(s.labels.size()) + " labels");
  }
  for (const auto& w : s.words) {
    if (w.empty()) throw ContractError("sentence '" + s.id + "' has an empty word");
  }
  if (s.has_pieces()) {
    if (s.word_pieces.size() != s.words.size()) {
      throw ContractError("sentence '" + s.id +
                          "' piece lists do not cover every word");
    }
    for (const auto& p : s.word_pieces) {
      if (p.empty()) {
        throw ContractError("sentence '" + s.id + "' has a word with no pieces");
      }
    }
  }
}

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> cols;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      cols.push_back(line.substr(start));
      break;
    }
    cols.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return cols;
}

class CorpusParser {
 public:
  explicit CorpusParser(const ReadOptions& options) : options_(options) {
    result_.corpus.source = options.source;
  }

  void feed(std::string_view line, std::size_t line_no) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) {
      if (open_) finish();
      return;
    }
    if (!open_) {
      if (line.find('\t') != std::string_view::npos) {
        throw ParseError("expected a sentence id header, found a tab-separated line",
                         line_no);
      }
      current_ = Sentence{};
      current_.id = std::string(line);
      header_line_ = line_no;
      open_ = true;
      return;
    }
    const auto cols = split_tabs(line);
    if (cols.size() != 2 && cols.size() != 3) {
      throw ParseError("expected 2 or 3 tab-separated columns, got " +
                           std::to_string(cols.size()),
                       line_no);
    }
    if (cols[0].empty()) throw ParseError("empty word", line_no);
    const auto label = parse_label(cols[1]);
    if (!label) {
      throw ParseError("unknown label \"" + std::string(cols[1]) + "\"", line_no);
    }
    const bool with_pieces = cols.size() == 3;
    if (!current_.words.empty() && with_pieces != current_.has_pieces()) {
      throw ParseError("mixed 2- and 3-column word lines in one sentence", line_no);
    }
    current_.words.emplace_back(cols[0]);
    current_.labels.push_back(*label);
    if (with_pieces) {
      auto pieces = split_whitespace(cols[2]);
      if (pieces.empty()) throw ParseError("empty piece list", line_no);
      current_.word_pieces.push_back(std::move(pieces));
    }
  }

  ParsedCorpus finish_all() {
    if (open_) finish();
    return std::move(result_);
  }

 private:
  void finish() {
    open_ = false;
    if (current_.words.empty()) {
      throw ParseError("sentence '" + current_.id + "' has no words", header_line_);
    }
    if (!ids_.insert(current_.id).second) {
      throw IntegrityError("line " + std::to_string(header_line_) +
                           ": duplicate sentence id '" + current_.id + "'");
    }
    if (options_.strict_iob2) {
      const auto violations = validate_iob2(current_.labels);
      if (!violations.empty()) {
        const auto& v = violations.front();
        throw ParseError("invalid IOB2 in sentence '" + current_.id + "': " + v.reason,
                         header_line_ + 1 + v.position);
      }
    }
    result_.corpus.sentences.push_back(std::move(current_));
    result_.header_lines.push_back(header_line_);
  }

  const ReadOptions& options_;
  ParsedCorpus result_;
  std::unordered_set<std::string> ids_;
  Sentence current_;
  std::size_t header_line_ = 0;
  bool open_ = false;
};

}  // namespace

ParsedCorpus parse_corpus(std::istream& in, const ReadOptions& options) {
  CorpusParser parser(options);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) parser.feed(line, ++line_no);
  return parser.finish_all();
}

Corpus read_corpus(std::istream& in, const ReadOptions& options) {
  return parse_corpus(in, options).corpus;
}

Corpus read_corpus_file(const std::string& path, const ReadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open corpus file '" + path + "'");
  ReadOptions opts = options;
  if (opts.source.empty()) opts.source = path;
  return read_corpus(in, opts);
}

void write_corpus(std::ostream& out, const Corpus& corpus) {
  for (const auto& s : corpus.sentences) {
    out << s.id << '\n';
    for (std::size_t i = 0; i < s.words.size(); ++i) {
      out << s.words[i] << '\t' << label_name(s.labels[i]);
      if (s.has_pieces()) {
        out << '\t';
        const auto& pieces = s.word_pieces[i];
        for (std::size_t p = 0; p < pieces.size(); ++p) {
          if (p) out << ' ';
          out << pieces[p];
        }
      }
      out << '\n';
    }
    out << '\n';
  }
}

std::string write_corpus_string(const Corpus& corpus) {
  std::ostringstream out;
  write_corpus(out, corpus);
  return out.str();
}

void write_corpus_file(const std::string& path, const Corpus& corpus) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write corpus file '" + path + "'");
  write_corpus(out, corpus);
  if (!out) throw Error("error while writing '" + path + "'");
}

Corpus read_tweets_jsonl(std::istream& in, const std::string& source) {
  Corpus corpus;
  corpus.source = source;
  std::unordered_set<std::string> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (split_whitespace(line).empty()) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(std::string("invalid JSON: ") + e.what(), line_no);
    }
    if (!obj.is_object() || !obj.contains("id") || !obj["id"].is_string() ||
        !obj.contains("text") || !obj["text"].is_string()) {
      throw ParseError("expected an object with string fields 'id' and 'text'",
                       line_no);
    }
    Sentence s;
    s.id = obj["id"].get<std::string>();
    s.raw_text = obj["text"].get<std::string>();
    s.words = split_whitespace(*s.raw_text);
    if (s.words.empty()) throw ParseError("tweet '" + s.id + "' has no words", line_no);
    if (s.id.empty() || s.id.find_first_of("\t\n\r") != std::string::npos) {
      throw ParseError("tweet id must be non-empty and free of tabs/newlines",
                       line_no);
    }
    s.labels.assign(s.words.size(), Label::O);
    if (!ids.insert(s.id).second) {
      throw IntegrityError("line " + std::to_string(line_no) +
                           ": duplicate tweet id '" + s.id + "'");
    }
    corpus.sentences.push_back(std::move(s));
  }
  return corpus;
}

StatsReport corpus_stats(const Corpus& corpus) {
  StatsReport report;
  report.sentence_count = corpus.size();
  for (const auto& s : corpus.sentences) {
    report.word_count += s.size();
    for (Label l : s.labels) {
      ++report.label_counts[index_of(l)];
      if (is_begin(l)) ++report.entity_counts[index_of(*kind_of(l))];
    }
  }
  return report;
}

}  // namespace plantner
