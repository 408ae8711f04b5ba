#include "synthetic_corpus.hpp"

#include <unistd.h>

#include <algorithm>
#include <set>
#include <cstdio>
#include <filesystem>
#include <unordered_set>
#include <vector>

#include "plantner/random.hpp"
#include "plantner/text.hpp"

namespace plantner::testing {

namespace {

struct Hazard {
  const char* text;
  EntityKind kind;
};

const std::vector<Hazard> kHoldoutHazards = {
    {"oïdium", EntityKind::Maladie},        {"Oidium", EntityKind::Maladie},
    {"teigne du poireau", EntityKind::Ravageur}, {"rouille", EntityKind::Maladie},
    {"mosaïque", EntityKind::Maladie},      {"mosaique du navet", EntityKind::Maladie},
    {"pourriture grise", EntityKind::Maladie}, {"taupe", EntityKind::Ravageur},
    {"TAUPIN", EntityKind::Ravageur},       {"mouche du chou", EntityKind::Ravageur},
    {"tipule", EntityKind::Ravageur},       {"cousin", EntityKind::Ravageur},
};

const std::vector<Hazard> kSeenHazards = {
    {"mildiou", EntityKind::Maladie},          {"phoma du colza", EntityKind::Maladie},
    {"septoriose", EntityKind::Maladie},       {"fusariose", EntityKind::Maladie},
    {"tavelure du pommier", EntityKind::Maladie}, {"charbon", EntityKind::Maladie},
    {"Helminthosporiose", EntityKind::Maladie}, {"puceron", EntityKind::Ravageur},
    {"pucerons verts", EntityKind::Ravageur},  {"doryphore", EntityKind::Ravageur},
    {"pyrale du maïs", EntityKind::Ravageur},  {"carpocapse", EntityKind::Ravageur},
    {"altises", EntityKind::Ravageur},         {"limaces", EntityKind::Ravageur},
    {"charançon", EntityKind::Ravageur},       {"cécidomyie", EntityKind::Ravageur},
};

const std::vector<const char*> kFiller = {
    "le",        "la",       "les",      "des",     "sur",      "dans",   "ce",
    "matin",     "champ",    "parcelle", "blé",     "colza",    "vigne",  "pommiers",
    "observé",   "traitement", "attention", "encore", "beaucoup", "cette", "année",
    "sont",      "présents", "feuilles", "#agriculture", "@agri_fr", "!",  "?",
    "en",        "plein",    "semis",    "dégâts",  "importants", "chez", "nous",
    "météo",     "humide",   "favorise", "signalés", "bulletin", "BSV",   "secteur",
    "très",      "peu",      "avec",     "pluie",   "récolte",  "quel",   "désastre",
    "on",        "voit",     "surveillez", "vos",   "cultures", ":",      "https://t.co/x",
};

void append_hazard(Sentence& s, const Hazard& h) {
  const auto words = split_whitespace(h.text);
  for (std::size_t i = 0; i < words.size(); ++i) {
    s.words.push_back(words[i]);
    s.labels.push_back(i == 0 ? begin_label(h.kind) : inside_label(h.kind));
  }
}

}  // namespace

Corpus make_synthetic_corpus(const SyntheticCorpusSpec& spec) {
  Rng rng(spec.seed);
  Corpus corpus;
  corpus.source = "synthetic";
  // Holdout sentences are interleaved at random positions.
  const auto order = rng.permutation(spec.total_sentences);
  std::vector<bool> is_holdout(spec.total_sentences, false);
  for (std::size_t i = 0; i < spec.holdout_sentences; ++i) is_holdout[order[i]] = true;

  for (std::size_t n = 0; n < spec.total_sentences; ++n) {
    Sentence s;
    char id[32];
    std::snprintf(id, sizeof id, "tw%05zu", n);
    s.id = id;
    const std::size_t filler =
        spec.min_filler + rng.below(spec.max_filler - spec.min_filler + 1);
    const std::size_t mentions = is_holdout[n] ? 1 + rng.below(2) : rng.below(3);
    // Mention slots are placed among the filler words.
    std::vector<std::size_t> slots;
    for (std::size_t m = 0; m < mentions; ++m) slots.push_back(rng.below(filler + 1));
    std::sort(slots.begin(), slots.end());
    std::size_t next_slot = 0;
    for (std::size_t w = 0; w <= filler; ++w) {
      while (next_slot < slots.size() && slots[next_slot] == w) {
        const bool holdout_mention = is_holdout[n] && next_slot == 0;
        const auto& list = holdout_mention ? kHoldoutHazards : kSeenHazards;
        append_hazard(s, list[rng.below(list.size())]);
        // Keep adjacent mentions apart so that each stays a separate entity.
        s.words.push_back("et");
        s.labels.push_back(Label::O);
        ++next_slot;
      }
      if (w < filler) {
        s.words.push_back(kFiller[rng.below(kFiller.size())]);
        s.labels.push_back(Label::O);
      }
    }
    corpus.sentences.push_back(std::move(s));
  }
  return corpus;
}

std::vector<std::string> vocab_pieces(const Corpus& corpus) {
  std::set<std::string> pieces;
  for (const auto& s : corpus.sentences) {
    for (const auto& w : s.words) {
      const auto offsets = code_point_offsets(w);
      const std::size_t n = offsets.size() - 1;
      if (n <= 4) {
        pieces.insert("_" + w);
        continue;
      }
      pieces.insert("_" + w.substr(0, offsets[3]));
      for (std::size_t c = 3; c < n; c += 3) {
        const std::size_t end = std::min(c + 3, n);
        pieces.insert(w.substr(offsets[c], offsets[end] - offsets[c]));
      }
    }
  }
  return {pieces.begin(), pieces.end()};
}

Vocab make_vocab(const Corpus& corpus) {
  const auto pieces = vocab_pieces(corpus);
  return Vocab({pieces.begin(), pieces.end()}, "<unk>");
}

std::string temp_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() /
                   ("plantner_test_" + name + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir.string();
}

}  // namespace plantner::testing
