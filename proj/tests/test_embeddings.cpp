#include <doctest.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <sstream>

#include "plantner/embeddings.hpp"
#include "plantner/error.hpp"
#include "plantner/evaluation.hpp"
#include "plantner/experiment.hpp"
#include "plantner/linear_head.hpp"
#include "plantner/random.hpp"
#include "synthetic_corpus.hpp"

using namespace plantner;

namespace {

std::string serialize(const EmbeddingFile& f) {
  std::ostringstream out;
  write_embeddings(out, f);
  return out.str();
}

EmbeddingFile parse(const std::string& bytes) {
  std::istringstream in(bytes);
  return read_embeddings(in);
}

std::uint32_t u32_at(const std::string& b, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(b[at + i]);
  return v;
}

bool bit_equal(const EmbeddingMatrix& a, const EmbeddingMatrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         std::memcmp(a.values().data(), b.values().data(), a.values().size() * sizeof(float)) == 0;
}

}  // namespace

TEST_CASE("file layout") {
  const std::string empty = serialize(EmbeddingFile(4));
  CHECK(empty.size() == 16);
  CHECK(empty.substr(0, 8) == "PWEMB001");
  CHECK(u32_at(empty, 8) == 4);
  CHECK(u32_at(empty, 12) == 0);
  CHECK(parse(empty).size() == 0);

  EmbeddingFile f(3);
  f.add("ab", EmbeddingMatrix(2, 3));
  const std::string bytes = serialize(f);
  // header, u16 id length, id, u32 rows, 6 floats
  CHECK(bytes.size() == 16 + 2 + 2 + 4 + 6 * 4);
  CHECK(bytes[16] == 2);
  CHECK(bytes[17] == 0);
  CHECK(bytes.substr(18, 2) == "ab");
  CHECK(u32_at(bytes, 20) == 2);
  const EmbeddingFile back = parse(bytes);
  REQUIRE(back.find("ab") != nullptr);
  CHECK(*back.find("ab") == EmbeddingMatrix(2, 3));
}

TEST_CASE("random files round-trip bit-exactly") {
  Rng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const std::uint32_t dim = 1 + static_cast<std::uint32_t>(rng.below(16));
    EmbeddingFile f(dim);
    for (std::size_t e = 0, n = rng.below(6); e < n; ++e) {
      const std::size_t rows = rng.below(5);
      std::vector<float> values(rows * dim);
      for (auto& v : values) {
        std::uint32_t bits;
        do {
          bits = static_cast<std::uint32_t>(rng.next());
          std::memcpy(&v, &bits, sizeof v);
        } while (!std::isfinite(v));
      }
      f.add("id" + std::to_string(e) + "é", EmbeddingMatrix(rows, dim, values));
    }
    const EmbeddingFile back = parse(serialize(f));
    CHECK(back.dim() == dim);
    REQUIRE(back.size() == f.size());
    for (std::size_t e = 0; e < f.size(); ++e) {
      CHECK(back.entries()[e].first == f.entries()[e].first);
      CHECK(bit_equal(back.entries()[e].second, f.entries()[e].second));
    }
  }
}

TEST_CASE("corrupt files are rejected") {
  EmbeddingFile f(2);
  f.add("x", EmbeddingMatrix(1, 2, {1.0f, 2.0f}));
  const std::string good = serialize(f);

  std::string bad = good;
  bad[0] = 'Q';
  CHECK_THROWS_AS(parse(bad), FormatError);
  CHECK_THROWS_AS(parse("PWE"), FormatError);
  CHECK_THROWS_AS(parse(good.substr(0, good.size() - 1)), CorruptionError);
  CHECK_THROWS_AS(parse(good + "z"), CorruptionError);

  std::string zero_dim = good;
  zero_dim[8] = 0;
  CHECK_THROWS_AS(parse(zero_dim), CorruptionError);

  std::string nan = good;
  const float q = std::numeric_limits<float>::quiet_NaN();
  std::memcpy(nan.data() + nan.size() - 4, &q, 4);
  CHECK_THROWS_AS(parse(nan), CorruptionError);

  // Two entries with the same id, spliced by hand.
  std::string dup = good;
  dup[12] = 2;
  dup += good.substr(16);
  CHECK_THROWS_AS(parse(dup), IntegrityError);

  CHECK_THROWS_AS(f.add("x", EmbeddingMatrix(1, 2)), IntegrityError);
  CHECK_THROWS_AS(f.add("y", EmbeddingMatrix(1, 3)), ContractError);
  EmbeddingFile inf(1);
  inf.add("i", EmbeddingMatrix(1, 1, {std::numeric_limits<float>::infinity()}));
  std::ostringstream sink;
  CHECK_THROWS_AS(write_embeddings(sink, inf), DataError);
}

TEST_CASE("synthetic_embed") {
  const Corpus corpus = testing::make_synthetic_corpus({50, 10, 2});
  const Vocab vocab = testing::make_vocab(corpus);
  const auto tokens = tokenize_corpus(corpus, &vocab, kDefaultMaxPieces);
  const auto& ts = tokens.sentences[3];

  const auto a = synthetic_embed(ts, 64, 5, 1.0);
  CHECK(a.rows() == ts.size());
  CHECK(a.cols() == 64);
  CHECK(bit_equal(a, synthetic_embed(ts, 64, 5, 1.0)));
  CHECK_FALSE(bit_equal(a, synthetic_embed(ts, 64, 6, 1.0)));
  CHECK_THROWS_AS(synthetic_embed(ts, 4, 5, 1.0), ContractError);
  CHECK_THROWS_AS(synthetic_embed(ts, 64, 5, 1.5), ContractError);

  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < 64; ++j) {
      const bool in_block = j / 8 == index_of(ts.piece_labels[i]);
      const float base = in_block ? kSyntheticSignal : 0.0f;
      CHECK(a.row(i)[j] >= base - kSyntheticNoise);
      CHECK(a.row(i)[j] < base + kSyntheticNoise + 1e-6f);
    }
  }

  SUBCASE("no label information at separability 0") {
    TokenizedSentence relabelled = ts;
    for (auto& l : relabelled.piece_labels) l = label_at((index_of(l) + 1) % kNumLabels);
    CHECK(bit_equal(synthetic_embed(ts, 64, 5, 0.0), synthetic_embed(relabelled, 64, 5, 0.0)));
  }
}

TEST_CASE("join_embeddings") {
  TokenizedSentence ts;
  ts.sentence_id = "a";
  ts.pieces = {"_x", "y"};
  ts.word_of_piece = {0, 0};
  ts.piece_labels = {Label::O, Label::O};
  ts.kept_words = 1;

  EmbeddingFile f(2);
  f.add("a", EmbeddingMatrix(2, 2));
  const auto joined = join_embeddings({ts}, f);
  REQUIRE(joined.size() == 1);
  CHECK(joined[0].embeddings == f.find("a"));

  EmbeddingFile short_rows(2);
  short_rows.add("a", EmbeddingMatrix(1, 2));
  CHECK_THROWS_AS(join_embeddings({ts}, short_rows), JoinError);
  CHECK_THROWS_AS(join_embeddings({ts}, EmbeddingFile(2)), JoinError);
}

TEST_CASE("separable synthetic embeddings are learnable by the head") {
  const Corpus corpus = testing::make_synthetic_corpus({512, 0, 11});
  const Vocab vocab = testing::make_vocab(corpus);
  const auto tokens = tokenize_corpus(corpus, &vocab, kDefaultMaxPieces);
  EmbeddingFile f(64);
  for (const auto& ts : tokens.sentences) f.add(ts.sentence_id, synthetic_embed(ts, 64, 3, 1.0));
  const auto joined = join_embeddings(tokens.sentences, f);
  TrainConfig config = TrainConfig::head();
  config.seed = 2;
  const auto result = train(joined, config);
  CHECK(evaluate_pieces(result.params, joined).weighted.f1 >= 0.99);
}
