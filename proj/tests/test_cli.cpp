#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "plantner/cli.hpp"
#include "plantner/corpus.hpp"
#include "synthetic_corpus.hpp"

using namespace plantner;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("usage errors and version") {
  CHECK(cli({}).code == 2);
  CHECK(cli({"frobnicate"}).code == 2);
  CHECK(cli({"validate", "--bogus"}).code == 2);
  CHECK(cli({"validate"}).code == 2);
  const Run help = cli({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("grid") != std::string::npos);
  const Run version = cli({"--version"});
  CHECK(version.code == 0);
  CHECK(version.out.find("PWEMB001") != std::string::npos);
  CHECK(cli({"stats", "--corpus", "/nonexistent/file.tsv"}).code == 1);
}

TEST_CASE("validate, stats and lexicon commands") {
  const fs::path dir = testing::temp_dir("cli_small");
  write_text(dir / "good.tsv", "t1\nle\tO\nmildiou\tB-maladie\n\nt2\nmouche\tB-ravageur\ndu\tI-ravageur\n\n");
  write_text(dir / "bad.tsv", "t1\nle\tO\nmildiou\tI-maladie\n\nt2\nx\tB-maladie\ny\tI-ravageur\n\n");
  write_text(dir / "diseases.txt", "mildiou\n");
  write_text(dir / "pests.txt", "mouche du chou\nmouche\n");

  const Run good = cli({"validate", "--corpus", (dir / "good.tsv").string()});
  CHECK(good.code == 0);
  CHECK(json::parse(good.out)["violations"].empty());

  const Run bad = cli({"validate", "--corpus", (dir / "bad.tsv").string()});
  CHECK(bad.code == 1);
  const json v = json::parse(bad.out)["violations"];
  REQUIRE(v.size() == 2);
  CHECK(v[0]["line"] == 3);
  CHECK(v[1]["line"] == 7);
  CHECK(v[1]["sentence"] == "t2");
  CHECK(bad.err.find(":3:") != std::string::npos);

  CHECK(cli({"stats", "--corpus", (dir / "bad.tsv").string()}).code == 1);
  const Run stats = cli({"stats", "--corpus", (dir / "good.tsv").string()});
  CHECK(stats.code == 0);
  CHECK(json::parse(stats.out)["sentence_count"] == 2);

  const Run tagged = cli({"baseline-tag", "--corpus", (dir / "good.tsv").string(), "--diseases",
                          (dir / "diseases.txt").string(), "--pests", (dir / "pests.txt").string()});
  REQUIRE(tagged.code == 0);
  std::istringstream tagged_in(tagged.out);
  const Corpus c = read_corpus(tagged_in);
  CHECK(c.sentences[0].labels == std::vector<Label>{Label::O, Label::BMaladie});
  CHECK(c.sentences[1].labels == std::vector<Label>{Label::BRavageur, Label::O});

  const Run matched = cli({"match", "--corpus", (dir / "good.tsv").string(), "--diseases",
                           (dir / "diseases.txt").string(), "--pests", (dir / "pests.txt").string()});
  CHECK(matched.code == 0);
  CHECK(matched.out.find("\"term\":\"mildiou\"") != std::string::npos);

  write_text(dir / "pool.jsonl",
             "{\"id\":\"a\",\"text\":\"Le mildiou\"}\n{\"id\":\"b\",\"text\":\"une mouche\"}\n");
  const Run sampled = cli({"sample", "--jsonl", (dir / "pool.jsonl").string(), "--diseases",
                           (dir / "diseases.txt").string(), "--pests", (dir / "pests.txt").string(),
                           "--k", "1"});
  CHECK(sampled.code == 0);
  std::istringstream sampled_in(sampled.out);
  CHECK(read_corpus(sampled_in).size() == 2);
  fs::remove_all(dir);
}

TEST_CASE("end-to-end pipeline") {
  const fs::path dir = testing::temp_dir("cli_e2e");
  const Corpus corpus = testing::make_synthetic_corpus({});
  write_corpus_file((dir / "corpus.tsv").string(), corpus);
  {
    std::ofstream v(dir / "vocab.txt");
    for (const auto& p : testing::vocab_pieces(corpus)) v << p << '\n';
  }
  const std::string vocab = (dir / "vocab.txt").string();

  const Run split = cli({"split", "--corpus", (dir / "corpus.tsv").string(), "--seed", "3",
                         "--out-dir", (dir / "split").string()});
  REQUIRE(split.code == 0);
  const json sj = json::parse(split.out);
  CHECK(sj["test"] == 207);
  CHECK(sj["appendix"] == 181);
  CHECK(sj["folds"][0]["train"] == 512);
  CHECK(sj["folds"][0]["validation"] == 309);

  for (const char* sep : {"1.0", "0.2"}) {
    const Run e = cli({"embed-synth", "--corpus", (dir / "corpus.tsv").string(), "--vocab", vocab,
                       "--dim", "32", "--seed", "1", "--separability", sep, "--out",
                       (dir / (std::string("emb_") + sep + ".bin")).string()});
    REQUIRE(e.code == 0);
    CHECK(json::parse(e.out)["entries"] == 1028);
  }
  const std::string emb = (dir / "emb_1.0.bin").string();

  const Run tr = cli({"train", "--corpus", (dir / "split" / "fold0.train.tsv").string(),
                      "--embeddings", emb, "--vocab", vocab, "--preset", "head", "--seed", "2",
                      "--out", (dir / "head.bin").string()});
  REQUIRE(tr.code == 0);
  const json tj = json::parse(tr.out);
  CHECK(tj["batch_size"] == 32);
  CHECK(tj["history"].size() == 20);

  const Run pr = cli({"predict", "--corpus", (dir / "split" / "test.tsv").string(), "--embeddings",
                      emb, "--model", (dir / "head.bin").string(), "--vocab", vocab, "--out",
                      (dir / "pred.tsv").string(), "--entities", (dir / "entities.jsonl").string()});
  REQUIRE(pr.code == 0);
  CHECK(fs::exists(dir / "entities.jsonl"));

  const Run ev = cli({"eval", "--gold", (dir / "split" / "test.tsv").string(), "--pred",
                      (dir / "pred.tsv").string(), "--vocab", vocab});
  REQUIRE(ev.code == 0);
  const json ej = json::parse(ev.out);
  CHECK(ej["level"] == "piece");
  CHECK(ej["token"]["weighted"]["f1"].get<double>() >= 0.95);

  const Run word_level = cli({"eval", "--gold", (dir / "split" / "test.tsv").string(), "--pred",
                              (dir / "pred.tsv").string()});
  REQUIRE(word_level.code == 0);
  CHECK(json::parse(word_level.out)["level"] == "word");

  write_text(dir / "grid.json", json{{"split_manifest", "split/manifest.json"},
                                     {"models",
                                      {{{"id", "sharp"}, {"embeddings", "emb_1.0.bin"}},
                                       {{"id", "blurred"}, {"embeddings", "emb_0.2.bin"}}}},
                                     {"sizes", {16, 64}},
                                     {"master_seed", 9},
                                     {"preset", "head"},
                                     {"epochs", 3},
                                     {"vocab", "vocab.txt"}}
                                    .dump());
  const Run g1 = cli({"grid", "--manifest", (dir / "grid.json").string(), "--out-dir",
                      (dir / "g1").string()});
  REQUIRE(g1.code == 0);
  const Run g2 = cli({"grid", "--manifest", (dir / "grid.json").string(), "--out-dir",
                      (dir / "g2").string(), "--jobs", "3"});
  REQUIRE(g2.code == 0);
  const std::string records = read_text(dir / "g1" / "records.jsonl");
  CHECK(records == read_text(dir / "g2" / "records.jsonl"));
  CHECK(std::count(records.begin(), records.end(), '\n') == 2 * 5 * 2 * 3 * 2);
  CHECK(json::parse(read_text(dir / "g1" / "failures.json")).empty());
  for (const char* f : {"weighted_f1.csv", "pest_f1.csv", "disease_f1.csv", "summary.json"}) {
    CHECK(fs::exists(dir / "g1" / f));
  }

  const Run rp = cli({"report", "--records", (dir / "g1" / "records.jsonl").string(), "--out-dir",
                      (dir / "rep").string()});
  REQUIRE(rp.code == 0);
  CHECK(read_text(dir / "rep" / "weighted_f1.csv") == read_text(dir / "g1" / "weighted_f1.csv"));

  write_text(dir / "broken.json", "{\"models\": []}");
  CHECK(cli({"grid", "--manifest", (dir / "broken.json").string(), "--out-dir",
             (dir / "g3").string()})
            .code == 1);
  fs::remove_all(dir);
}
