#include "plantner/gazetteer.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <set>

#include "plantner/error.hpp"
#include "plantner/random.hpp"
#include "plantner/text.hpp"

namespace plantner {

bool HazardLexicon::add(const std::string& term, EntityKind kind) {
  std::string key = normalize_term(term);
  if (key.empty()) return false;
  const auto [it, inserted] = entries_.emplace(key, kind);
  if (!inserted && it->second != kind) {
    throw IntegrityError("term '" + key + "' is listed as both maladie and ravageur");
  }
  const auto words = static_cast<std::size_t>(std::count(key.begin(), key.end(), ' ')) + 1;
  max_term_words_ = std::max(max_term_words_, words);
  return true;
}

std::optional<EntityKind> HazardLexicon::find(const std::string& normalized) const {
  const auto it = entries_.find(normalized);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> read_term_list(std::istream& in) {
  std::vector<std::string> terms;
  std::set<std::string> seen;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty() && line.front() == '#') continue;
    std::string term = normalize_term(line);
    if (term.empty()) continue;
    if (seen.insert(term).second) terms.push_back(std::move(term));
  }
  return terms;
}

HazardLexicon load_lexicon(std::istream& diseases, std::istream& pests) {
  const auto disease_terms = read_term_list(diseases);
  const auto pest_terms = read_term_list(pests);
  const std::set<std::string> disease_set(disease_terms.begin(), disease_terms.end());
  std::vector<std::string> conflicts;
  for (const auto& t : pest_terms) {
    if (disease_set.count(t)) conflicts.push_back(t);
  }
  if (!conflicts.empty()) {
    std::string msg = "terms listed as both disease and pest:";
    for (const auto& c : conflicts) msg += " '" + c + "'";
    throw IntegrityError(msg);
  }
  HazardLexicon lexicon;
  for (const auto& t : disease_terms) lexicon.add(t, EntityKind::Maladie);
  for (const auto& t : pest_terms) lexicon.add(t, EntityKind::Ravageur);
  return lexicon;
}

HazardLexicon load_lexicon_files(const std::string& disease_path,
                                 const std::string& pest_path) {
  std::ifstream d(disease_path, std::ios::binary);
  if (!d) throw Error("cannot open disease list '" + disease_path + "'");
  std::ifstream p(pest_path, std::ios::binary);
  if (!p) throw Error("cannot open pest list '" + pest_path + "'");
  return load_lexicon(d, p);
}

std::vector<std::string> normalized_words(const Sentence& sentence) {
  std::vector<std::string> out;
  out.reserve(sentence.size());
  for (const auto& w : sentence.words) out.push_back(normalize_term(w));
  return out;
}

std::vector<TermMatch> match_terms(const Sentence& sentence,
                                   const HazardLexicon& lexicon) {
  const auto words = normalized_words(sentence);
  const std::size_t n = words.size();
  std::vector<bool> claimed(n, false);
  std::vector<TermMatch> matches;
  for (std::size_t len = std::min(lexicon.max_term_words(), n); len >= 1; --len) {
    for (std::size_t start = 0; start + len <= n; ++start) {
      const auto first = claimed.begin() + static_cast<std::ptrdiff_t>(start);
      if (std::any_of(first, first + static_cast<std::ptrdiff_t>(len),
                      [](bool c) { return c; })) {
        continue;
      }
      std::string key = words[start];
      for (std::size_t i = start + 1; i < start + len; ++i) key += ' ' + words[i];
      if (const auto kind = lexicon.find(key)) {
        std::fill(first, first + static_cast<std::ptrdiff_t>(len), true);
        matches.push_back({start, start + len - 1, key, *kind});
      }
    }
  }
  std::sort(matches.begin(), matches.end(),
            [](const TermMatch& a, const TermMatch& b) {
              return a.start_word < b.start_word;
            });
  return matches;
}

Corpus sample_per_hazard(const Corpus& pool, const HazardLexicon& lexicon,
                         std::size_t k, std::uint64_t seed) {
  if (k < 1) throw ContractError("sample_per_hazard: k must be at least 1");
  std::map<std::string, std::set<std::string>> ids_by_term;
  std::map<std::string, const Sentence*> by_id;
  for (const auto& s : pool.sentences) {
    by_id.emplace(s.id, &s);
    for (const auto& m : match_terms(s, lexicon)) ids_by_term[m.term].insert(s.id);
  }
  std::set<std::string> selected;
  for (const auto& [term, id_set] : ids_by_term) {
    const std::vector<std::string> ids(id_set.begin(), id_set.end());
    Rng rng(SeedBuilder(seed).add("hazard-sample").add(term).seed());
    for (std::size_t i : rng.sample(ids.size(), std::min(k, ids.size()))) {
      selected.insert(ids[i]);
    }
  }
  Corpus out;
  out.source = pool.source;
  for (const auto& id : selected) out.sentences.push_back(*by_id.at(id));
  return out;
}

std::vector<Label> baseline_tag(const Sentence& sentence,
                                const HazardLexicon& lexicon) {
  std::vector<Label> labels(sentence.size(), Label::O);
  for (const auto& m : match_terms(sentence, lexicon)) {
    labels[m.start_word] = begin_label(m.kind);
    for (std::size_t i = m.start_word + 1; i <= m.end_word; ++i) {
      labels[i] = inside_label(m.kind);
    }
  }
  return labels;
}

}  // namespace plantner
