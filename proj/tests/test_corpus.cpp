#include <doctest.h>

#include <sstream>

#include "oracles.hpp"
#include "plantner/corpus.hpp"
#include "plantner/error.hpp"
#include "synthetic_corpus.hpp"

using namespace plantner;

namespace {

Corpus parse(const std::string& text, bool strict = true) {
  std::istringstream in(text);
  ReadOptions opts;
  opts.strict_iob2 = strict;
  return read_corpus(in, opts);
}

}  // namespace

TEST_CASE("label index order is fixed") {
  CHECK(index_of(Label::O) == 0);
  CHECK(index_of(Label::BMaladie) == 1);
  CHECK(index_of(Label::IMaladie) == 2);
  CHECK(index_of(Label::BRavageur) == 3);
  CHECK(index_of(Label::IRavageur) == 4);
  for (std::size_t i = 0; i < kNumLabels; ++i) {
    CHECK(parse_label(label_name(label_at(i))) == label_at(i));
  }
  CHECK_FALSE(parse_label("B-Maladie").has_value());
  CHECK(kind_of(Label::IRavageur) == EntityKind::Ravageur);
  CHECK_FALSE(kind_of(Label::O).has_value());
}

TEST_CASE("validate_iob2 examples") {
  using L = Label;
  CHECK(validate_iob2({L::BMaladie, L::IMaladie, L::O}).empty());

  const auto orphan = validate_iob2({L::O, L::IMaladie, L::O});
  REQUIRE(orphan.size() == 1);
  CHECK(orphan[0].position == 1);

  const auto mismatch = validate_iob2({L::BMaladie, L::IRavageur});
  REQUIRE(mismatch.size() == 1);
  CHECK(mismatch[0].position == 1);
  CHECK(mismatch[0].reason.find("kind mismatch") != std::string::npos);

  CHECK(validate_iob2({L::IRavageur}).size() == 1);
}

TEST_CASE("validate_iob2 agrees with a regular-grammar checker") {
  Rng rng(11);
  for (int trial = 0; trial < 10000; ++trial) {
    const auto labels = oracle::random_labels(rng, 1 + rng.below(20));
    CHECK(validate_iob2(labels).empty() == oracle::iob2_grammar_accepts(labels));
  }
}

TEST_CASE("read_corpus minimal file and empty stream") {
  const Corpus c = parse("1\nmildiou\tB-maladie\n\n");
  REQUIRE(c.size() == 1);
  CHECK(c.sentences[0].id == "1");
  CHECK(c.sentences[0].words == std::vector<std::string>{"mildiou"});
  CHECK(c.sentences[0].labels == std::vector<Label>{Label::BMaladie});
  CHECK(parse("").empty());
}

TEST_CASE("read_corpus accepts a missing final blank line") {
  CHECK(parse("a\nle\tO\nmildiou\tB-maladie").size() == 1);
}

TEST_CASE("read_corpus errors") {
  SUBCASE("unknown label is named") {
    try {
      parse("1\nmildiou\tB-illness\n\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("B-illness") != std::string::npos);
      CHECK(e.line() == 2);
    }
  }
  SUBCASE("wrong column count carries the line number") {
    try {
      parse("1\nle\tO\nmildiou\n\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
    }
    CHECK_THROWS_AS(parse("1\na\tO\tx\ty\n\n"), ParseError);
  }
  SUBCASE("duplicate id") {
    CHECK_THROWS_AS(parse("1\na\tO\n\n1\nb\tO\n\n"), IntegrityError);
  }
  SUBCASE("strict mode rejects invalid gold, permissive accepts it") {
    const std::string bad = "1\nle\tO\nmildiou\tI-maladie\n\n";
    try {
      parse(bad);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
    }
    CHECK(parse(bad, false).size() == 1);
  }
  SUBCASE("header without words") { CHECK_THROWS_AS(parse("1\n\n"), ParseError); }
}

TEST_CASE("write_corpus layout") {
  CHECK(write_corpus_string(Corpus{}).empty());
  Corpus c;
  c.sentences.push_back({"42", {"le", "mildiou"}, {Label::O, Label::BMaladie}, {}, {}});
  CHECK(write_corpus_string(c) == "42\nle\tO\nmildiou\tB-maladie\n\n");
}

TEST_CASE("pre-tokenized third column round-trips") {
  const std::string text = "7\nphoma\tB-maladie\t_pho ma\ndu\tI-maladie\t_du\n\n";
  const Corpus c = parse(text);
  REQUIRE(c.sentences[0].has_pieces());
  CHECK(c.sentences[0].word_pieces[0] == std::vector<std::string>{"_pho", "ma"});
  CHECK(write_corpus_string(c) == text);
  CHECK_THROWS_AS(parse("7\nphoma\tB-maladie\t_pho ma\ndu\tI-maladie\n\n"), ParseError);
}

TEST_CASE("round trip and idempotence over random corpora") {
  Rng rng(5);
  const char* vocab[] = {"le", "mildiou", "phoma", "oïdium", "#colza", "@agri", "!", "taupin"};
  for (int trial = 0; trial < 200; ++trial) {
    Corpus c;
    const std::size_t n = rng.below(6);
    for (std::size_t s = 0; s < n; ++s) {
      Sentence sent;
      sent.id = "id" + std::to_string(trial) + "_" + std::to_string(s);
      const std::size_t len = 1 + rng.below(10);
      for (std::size_t w = 0; w < len; ++w) sent.words.push_back(vocab[rng.below(8)]);
      sent.labels = oracle::random_valid_labels(rng, len);
      c.sentences.push_back(sent);
    }
    const std::string once = write_corpus_string(c);
    const Corpus back = parse(once);
    CHECK(back == c);
    CHECK(write_corpus_string(back) == once);
  }
}

TEST_CASE("jsonl ingestion") {
  std::istringstream in(
      "{\"id\": \"a\", \"text\": \"Le  mildiou arrive\"}\n\n{\"id\": \"b\", \"text\": \"x\"}\n");
  const Corpus c = read_tweets_jsonl(in);
  REQUIRE(c.size() == 2);
  CHECK(c.sentences[0].words == std::vector<std::string>{"Le", "mildiou", "arrive"});
  CHECK(c.sentences[0].labels == std::vector<Label>(3, Label::O));
  CHECK(c.sentences[0].raw_text == "Le  mildiou arrive");

  std::istringstream dup("{\"id\":\"a\",\"text\":\"x\"}\n{\"id\":\"a\",\"text\":\"y\"}\n");
  CHECK_THROWS_AS(read_tweets_jsonl(dup), IntegrityError);
  std::istringstream bad("{\"id\":1,\"text\":\"x\"}\n");
  CHECK_THROWS_AS(read_tweets_jsonl(bad), ParseError);
}

TEST_CASE("corpus_stats") {
  Corpus one;
  one.sentences.push_back(
      {"1", {"phoma", "du", "x"}, {Label::BMaladie, Label::IMaladie, Label::O}, {}, {}});
  const auto s = corpus_stats(one);
  CHECK(s.entity_counts[index_of(EntityKind::Maladie)] == 1);
  CHECK(s.entity_counts[index_of(EntityKind::Ravageur)] == 0);
  CHECK(s.word_count == 3);
  CHECK(s.sentence_count == 1);
  CHECK(corpus_stats(Corpus{}) == StatsReport{});
}

TEST_CASE("corpus_stats entity counts match an independent span scanner") {
  const Corpus c = testing::make_synthetic_corpus({200, 40, 3});
  const auto stats = corpus_stats(c);
  std::array<std::size_t, kNumEntityKinds> scanned{};
  std::size_t labels_total = 0;
  for (const auto& s : c.sentences) {
    for (const auto& [kind, start, end] : oracle::regex_spans(s.labels)) ++scanned[index_of(kind)];
  }
  for (auto n : stats.label_counts) labels_total += n;
  CHECK(stats.entity_counts == scanned);
  CHECK(labels_total == stats.word_count);
}
