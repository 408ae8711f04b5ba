#include "plantner/dataset_split.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <unordered_set>

#include <json.hpp>

#include "plantner/error.hpp"
#include "plantner/gazetteer.hpp"
#include "plantner/random.hpp"
#include "plantner/text.hpp"

namespace plantner {

const std::vector<std::string>& default_holdout_terms() {
  static const std::vector<std::string> terms = {
      "oïdium", "oidium", "teigne",  "rouille", "mosaïque", "mosaique",
      "pourriture", "taupe", "taupin", "mouche", "tipule", "cousin"};
  return terms;
}

void check_split_spec(const SplitSpec& spec) {
  if (spec.holdout_terms.empty()) throw ContractError("holdout term list is empty");
  if (spec.n_folds < 2) throw ContractError("at least two folds are required");
  if (spec.cv_pool_size == 0 || spec.cv_pool_size % spec.n_folds != 0) {
    throw ContractError("cv pool size " + std::to_string(spec.cv_pool_size) +
                        " is not a positive multiple of " +
                        std::to_string(spec.n_folds) + " folds");
  }
}

bool contains_term(const std::vector<std::string>& words, const std::string& term) {
  const auto tokens = split_whitespace(term);
  if (tokens.empty() || tokens.size() > words.size()) return false;
  return std::search(words.begin(), words.end(), tokens.begin(), tokens.end()) !=
         words.end();
}

TestPartition build_unseen_test(const Corpus& corpus,
                                const std::vector<std::string>& holdout_terms) {
  if (holdout_terms.empty()) throw ContractError("holdout term list is empty");
  std::vector<std::string> terms;
  for (const auto& t : holdout_terms) {
    auto n = normalize_term(t);
    if (!n.empty() && std::find(terms.begin(), terms.end(), n) == terms.end()) {
      terms.push_back(std::move(n));
    }
  }
  if (terms.empty()) throw ContractError("holdout term list has no usable terms");
  TestPartition out;
  out.test.source = corpus.source;
  out.remainder.source = corpus.source;
  for (const auto& s : corpus.sentences) {
    const auto words = normalized_words(s);
    const bool held_out = std::any_of(terms.begin(), terms.end(), [&](const auto& t) {
      return contains_term(words, t);
    });
    (held_out ? out.test : out.remainder).sentences.push_back(s);
  }
  return out;
}

namespace {

// Indices of the corpus sentences ordered by id, so that seeded draws do not
// depend on the order sentences arrive in.
std::vector<std::size_t> indices_by_id(const Corpus& corpus) {
  std::vector<std::size_t> order(corpus.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return corpus.sentences[a].id < corpus.sentences[b].id;
  });
  return order;
}

}  // namespace

SplitResult build_folds(const Corpus& remainder, const SplitSpec& spec) {
  check_split_spec(spec);
  if (remainder.size() < spec.cv_pool_size) {
    throw SizingError("cannot sample a cv pool of " + std::to_string(spec.cv_pool_size) +
                      " from " + std::to_string(remainder.size()) + " sentences");
  }
  const auto by_id = indices_by_id(remainder);
  Rng rng(SeedBuilder(spec.seed).add("cv-pool").seed());
  const auto drawn = rng.sample(by_id.size(), spec.cv_pool_size);

  // block_of[i] = fold whose validation core holds sentence i, or n_folds for
  // the appendix.
  const std::size_t block_size = spec.cv_pool_size / spec.n_folds;
  std::vector<std::size_t> block_of(remainder.size(), spec.n_folds);
  for (std::size_t d = 0; d < drawn.size(); ++d) block_of[by_id[drawn[d]]] = d / block_size;

  SplitResult result;
  for (std::size_t i = 0; i < remainder.size(); ++i) {
    if (block_of[i] == spec.n_folds) {
      result.appendix_ids.push_back(remainder.sentences[i].id);
    }
  }
  result.appendix_size = result.appendix_ids.size();
  result.folds.resize(spec.n_folds);
  for (std::size_t f = 0; f < spec.n_folds; ++f) {
    Fold& fold = result.folds[f];
    fold.train.source = remainder.source;
    fold.validation.source = remainder.source;
    for (std::size_t i = 0; i < remainder.size(); ++i) {
      if (block_of[i] == f) {
        fold.validation.sentences.push_back(remainder.sentences[i]);
      } else if (block_of[i] != spec.n_folds) {
        fold.train.sentences.push_back(remainder.sentences[i]);
      }
    }
    for (std::size_t i = 0; i < remainder.size(); ++i) {
      if (block_of[i] == spec.n_folds) {
        fold.validation.sentences.push_back(remainder.sentences[i]);
      }
    }
  }
  return result;
}

SplitResult split_corpus(const Corpus& corpus, const SplitSpec& spec) {
  check_split_spec(spec);
  if (corpus.empty()) throw ContractError("cannot split an empty corpus");
  auto partition = build_unseen_test(corpus, spec.holdout_terms);
  SplitResult result = build_folds(partition.remainder, spec);
  result.test = std::move(partition.test);
  return result;
}

Corpus sample_few_shot(const Corpus& train, std::size_t size, std::uint64_t seed) {
  if (size < 1) throw ContractError("few-shot size must be at least 1");
  if (size > train.size()) {
    throw SizingError("few-shot size " + std::to_string(size) + " exceeds the " +
                      std::to_string(train.size()) + " available training sentences");
  }
  const auto by_id = indices_by_id(train);
  Rng rng(SeedBuilder(seed).add("few-shot").seed());
  std::vector<bool> keep(train.size(), false);
  for (std::size_t d : rng.sample(by_id.size(), size)) keep[by_id[d]] = true;
  Corpus out;
  out.source = train.source;
  for (std::size_t i = 0; i < train.size(); ++i) {
    if (keep[i]) out.sentences.push_back(train.sentences[i]);
  }
  return out;
}

void write_split(const std::string& dir, const SplitResult& result,
                 const SplitSpec& spec) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const fs::path root(dir);
  nlohmann::json manifest;
  manifest["seed"] = spec.seed;
  manifest["cv_pool_size"] = spec.cv_pool_size;
  manifest["n_folds"] = spec.n_folds;
  manifest["holdout_terms"] = spec.holdout_terms;
  manifest["test"] = "test.tsv";
  manifest["test_size"] = result.test.size();
  manifest["appendix_size"] = result.appendix_size;
  manifest["appendix_ids"] = result.appendix_ids;
  write_corpus_file((root / "test.tsv").string(), result.test);
  nlohmann::json folds = nlohmann::json::array();
  for (std::size_t f = 0; f < result.folds.size(); ++f) {
    const std::string train_name = "fold" + std::to_string(f) + ".train.tsv";
    const std::string val_name = "fold" + std::to_string(f) + ".val.tsv";
    write_corpus_file((root / train_name).string(), result.folds[f].train);
    write_corpus_file((root / val_name).string(), result.folds[f].validation);
    folds.push_back({{"train", train_name},
                     {"validation", val_name},
                     {"train_size", result.folds[f].train.size()},
                     {"validation_size", result.folds[f].validation.size()}});
  }
  manifest["folds"] = folds;
  std::ofstream out(root / "manifest.json", std::ios::binary);
  if (!out) throw Error("cannot write split manifest in '" + dir + "'");
  out << manifest.dump(2) << '\n';
}

SplitResult read_split(const std::string& manifest_path) {
  namespace fs = std::filesystem;
  std::ifstream in(manifest_path, std::ios::binary);
  if (!in) throw Error("cannot open split manifest '" + manifest_path + "'");
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("split manifest: ") + e.what(), 0);
  }
  const fs::path root = fs::path(manifest_path).parent_path();
  SplitResult result;
  try {
    result.test = read_corpus_file((root / manifest.at("test").get<std::string>()).string());
    for (const auto& f : manifest.at("folds")) {
      Fold fold;
      fold.train = read_corpus_file((root / f.at("train").get<std::string>()).string());
      fold.validation =
          read_corpus_file((root / f.at("validation").get<std::string>()).string());
      result.folds.push_back(std::move(fold));
    }
    result.appendix_ids = manifest.at("appendix_ids").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("split manifest: ") + e.what(), 0);
  }
  result.appendix_size = result.appendix_ids.size();
  return result;
}

}  // namespace plantner
