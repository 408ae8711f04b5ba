#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "plantner/corpus.hpp"

namespace plantner {

// Hazard names reserved for the unseen-hazard test set. Spelling variants
// ("oïdium"/"oidium") normalize to one key.
const std::vector<std::string>& default_holdout_terms();

struct SplitSpec {
  std::vector<std::string> holdout_terms = default_holdout_terms();
  std::size_t cv_pool_size = 640;
  std::size_t n_folds = 5;
  std::uint64_t seed = 0;
};

// Throws ContractError for an empty holdout list, fewer than two folds or a
// pool size not divisible by the fold count.
void check_split_spec(const SplitSpec& spec);

struct Fold {
  Corpus train;
  Corpus validation;  // core block first, then the shared appendix
};

struct SplitResult {
  Corpus test;
  std::vector<Fold> folds;
  std::size_t appendix_size = 0;
  std::vector<std::string> appendix_ids;
};

struct TestPartition {
  Corpus test;
  Corpus remainder;
};

// True when the normalized words contain `term` (normalized, possibly
// multi-word) as a contiguous n-gram.
bool contains_term(const std::vector<std::string>& normalized_words,
                   const std::string& normalized_term);

// Every sentence mentioning a holdout term goes to `test`, the rest to
// `remainder`; both keep corpus order.
TestPartition build_unseen_test(const Corpus& corpus,
                                const std::vector<std::string>& holdout_terms);

// Samples spec.cv_pool_size sentences, cuts them into n_folds equal blocks,
// and appends whatever was not sampled to every validation set.
SplitResult build_folds(const Corpus& remainder, const SplitSpec& spec);

// build_unseen_test followed by build_folds.
SplitResult split_corpus(const Corpus& corpus, const SplitSpec& spec);

// Uniform sample of `size` training sentences. Samples drawn with one seed
// are nested: the sample of size s is contained in every larger one.
Corpus sample_few_shot(const Corpus& train, std::size_t size, std::uint64_t seed);

// Writes test.tsv, fold{i}.train.tsv, fold{i}.val.tsv and manifest.json into
// `dir` (created if missing).
void write_split(const std::string& dir, const SplitResult& result,
                 const SplitSpec& spec);

// Reloads a split from its manifest; corpus paths are resolved relative to
// the manifest's directory.
SplitResult read_split(const std::string& manifest_path);

}  // namespace plantner
