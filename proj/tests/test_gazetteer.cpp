#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "oracles.hpp"
#include "plantner/corpus.hpp"
#include "plantner/error.hpp"
#include "plantner/gazetteer.hpp"
#include "plantner/text.hpp"

using namespace plantner;

namespace {

HazardLexicon lexicon(const std::string& diseases, const std::string& pests) {
  std::istringstream d(diseases), p(pests);
  return load_lexicon(d, p);
}

Sentence words(std::vector<std::string> w, const std::string& id = "s") {
  Sentence s;
  s.id = id;
  s.words = std::move(w);
  s.labels.assign(s.words.size(), Label::O);
  return s;
}

}  // namespace

TEST_CASE("normalize_term") {
  CHECK(normalize_term("Oïdium") == "oidium");
  CHECK(normalize_term("MOSAÏQUE") == "mosaique");
  CHECK(normalize_term("  Mouche \t du   CHOU ") == "mouche du chou");
  CHECK(normalize_term("Œuf cécidomyie") == "oeuf cecidomyie");
  CHECK(normalize_term("e\xCC\x81") == "e");  // combining acute accent
  CHECK(normalize_term("") == "");
}

TEST_CASE("load_lexicon") {
  const auto lex = lexicon("mildiou\n", "taupin\n");
  CHECK(lex.size() == 2);
  CHECK(lex.find("mildiou") == EntityKind::Maladie);
  CHECK(lex.find("taupin") == EntityKind::Ravageur);

  CHECK(lexicon("Oïdium\n", "").entries().count("oidium") == 1);
  CHECK(lexicon("# comment\n\nrouille\n", "").size() == 1);

  try {
    lexicon("Rouille\nmildiou\n", "rouille\n");
    FAIL("expected IntegrityError");
  } catch (const IntegrityError& e) {
    CHECK(std::string(e.what()).find("rouille") != std::string::npos);
  }
  CHECK(lexicon("", "mouche du chou\n").max_term_words() == 3);
}

TEST_CASE("match_terms examples") {
  const auto lex = lexicon("mildiou\noidium\n", "mouche\nmouche du chou\n");
  const auto m1 = match_terms(words({"le", "mildiou", "arrive"}), lex);
  REQUIRE(m1.size() == 1);
  CHECK(m1[0].start_word == 1);
  CHECK(m1[0].end_word == 1);

  CHECK(match_terms(words({"OÏDIUM"}), lex).size() == 1);

  const auto m3 = match_terms(words({"mouche", "du", "chou"}), lex);
  REQUIRE(m3.size() == 1);
  CHECK(m3[0].start_word == 0);
  CHECK(m3[0].end_word == 2);
  CHECK(m3[0].term == "mouche du chou");
}

TEST_CASE("match_terms agrees with the exhaustive n-gram oracle") {
  const auto lex = lexicon("a\na b\nb c d\nc\nd e\n", "e\nb\nf g\nÉ f\n");
  const std::vector<std::string> alphabet = {"a", "B", "c", "d", "é", "e", "f", "g", "x"};
  Rng rng(21);
  for (int trial = 0; trial < 3000; ++trial) {
    std::vector<std::string> w;
    for (std::size_t i = 0, n = 1 + rng.below(10); i < n; ++i) {
      w.push_back(alphabet[rng.below(alphabet.size())]);
    }
    const Sentence s = words(w);
    const auto got = match_terms(s, lex);
    CHECK(got == oracle::exhaustive_matches(s, lex));
    for (std::size_t i = 1; i < got.size(); ++i) {
      CHECK(got[i - 1].end_word < got[i].start_word);
    }
    for (const auto& m : got) {
      std::string joined;
      for (std::size_t k = m.start_word; k <= m.end_word; ++k) joined += w[k] + " ";
      CHECK(normalize_term(joined) == m.term);
    }
  }
}

TEST_CASE("baseline_tag") {
  const auto lex = lexicon("mildiou\n", "mouche du chou\n");
  CHECK(baseline_tag(words({"le", "mildiou", "arrive"}), lex) ==
        std::vector<Label>{Label::O, Label::BMaladie, Label::O});
  CHECK(baseline_tag(words({"mouche", "du", "chou"}), lex) ==
        std::vector<Label>{Label::BRavageur, Label::IRavageur, Label::IRavageur});
  CHECK(baseline_tag(words({"rien", "ici"}), lex) == std::vector<Label>(2, Label::O));

  Rng rng(4);
  const std::vector<std::string> alphabet = {"mildiou", "mouche", "du", "chou", "x"};
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<std::string> w;
    for (std::size_t i = 0, n = 1 + rng.below(12); i < n; ++i) {
      w.push_back(alphabet[rng.below(alphabet.size())]);
    }
    CHECK(validate_iob2(baseline_tag(words(w), lex)).empty());
  }
}

TEST_CASE("sample_per_hazard") {
  const auto lex = lexicon("mildiou\nrouille\n", "taupin\n");
  Corpus pool;
  for (int i = 0; i < 10; ++i) pool.sentences.push_back(words({"mildiou", "x"}, "m" + std::to_string(i)));
  for (int i = 0; i < 3; ++i) pool.sentences.push_back(words({"taupin"}, "t" + std::to_string(i)));
  pool.sentences.push_back(words({"rouille", "taupin"}, "both"));
  pool.sentences.push_back(words({"rien"}, "none"));

  const Corpus a = sample_per_hazard(pool, lex, 5, 99);
  std::size_t mildiou = 0, taupin = 0;
  for (const auto& s : a.sentences) {
    mildiou += s.id[0] == 'm';
    taupin += s.id[0] == 't' || s.id == "both";
    CHECK(s.id != "none");
  }
  CHECK(mildiou == 5);
  // 4 tweets match taupin; all are taken ("up to" 5).
  CHECK(taupin == 4);
  // "both" is selected by two terms but listed once.
  CHECK(std::count_if(a.sentences.begin(), a.sentences.end(),
                      [](const Sentence& s) { return s.id == "both"; }) == 1);
  CHECK(sample_per_hazard(pool, lex, 5, 99) == a);
  CHECK_THROWS_AS(sample_per_hazard(pool, lex, 0, 1), ContractError);

  SUBCASE("invariant to pool order") {
    Corpus shuffled = pool;
    Rng rng(1);
    const auto order = rng.permutation(pool.size());
    for (std::size_t i = 0; i < order.size(); ++i) shuffled.sentences[i] = pool.sentences[order[i]];
    CHECK(sample_per_hazard(shuffled, lex, 5, 99) == a);
  }
  SUBCASE("different seeds eventually differ") {
    bool differs = false;
    for (std::uint64_t seed = 0; seed < 20 && !differs; ++seed) {
      differs = !(sample_per_hazard(pool, lex, 5, seed) == a);
    }
    CHECK(differs);
  }
}
