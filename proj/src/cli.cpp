#include "plantner/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "plantner/corpus.hpp"
#include "plantner/dataset_split.hpp"
#include "plantner/embeddings.hpp"
#include "plantner/error.hpp"
#include "plantner/evaluation.hpp"
#include "plantner/experiment.hpp"
#include "plantner/gazetteer.hpp"
#include "plantner/json_io.hpp"
#include "plantner/linear_head.hpp"
#include "plantner/tokenization.hpp"

namespace plantner {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string version_text() {
  return std::string("plantner ") + kToolVersion + " (embeddings " +
         std::string(kEmbeddingMagic) + ", checkpoint " + std::string(kCheckpointMagic) +
         ")";
}

// Writes to `path`, or to `fallback` when the path is empty or "-".
void emit(const std::string& path, std::ostream& fallback,
          const std::function<void(std::ostream&)>& body) {
  if (path.empty() || path == "-") {
    body(fallback);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  body(out);
  if (!out) throw Error("error while writing '" + path + "'");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json_file(const std::string& path) {
  try {
    return json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what(), 0);
  }
}

std::optional<Vocab> maybe_vocab(const std::string& path) {
  if (path.empty()) return std::nullopt;
  return read_vocab_file(path);
}

// ---------------------------------------------------------------- validate

struct ValidateArgs {
  std::string corpus;
};

int cmd_validate(const ValidateArgs& a, std::ostream& out, std::ostream& err) {
  ReadOptions opts;
  opts.strict_iob2 = false;
  std::ifstream in(a.corpus, std::ios::binary);
  if (!in) throw Error("cannot open corpus file '" + a.corpus + "'");
  const ParsedCorpus parsed = parse_corpus(in, opts);
  json violations = json::array();
  for (std::size_t i = 0; i < parsed.corpus.size(); ++i) {
    const Sentence& s = parsed.corpus.sentences[i];
    for (const auto& v : validate_iob2(s.labels)) {
      const std::size_t line = parsed.header_lines[i] + 1 + v.position;
      violations.push_back({{"sentence", s.id},
                            {"line", line},
                            {"position", v.position},
                            {"label", std::string(label_name(s.labels[v.position]))},
                            {"reason", v.reason}});
      err << a.corpus << ":" << line << ": " << v.reason << '\n';
    }
  }
  out << json{{"sentences", parsed.corpus.size()}, {"violations", violations}}.dump() << '\n';
  return violations.empty() ? 0 : 1;
}

// ------------------------------------------------------------------- stats

struct StatsArgs {
  std::string corpus;
  bool permissive = false;
};

int cmd_stats(const StatsArgs& a, std::ostream& out, std::ostream&) {
  ReadOptions opts;
  opts.strict_iob2 = !a.permissive;
  const Corpus corpus = read_corpus_file(a.corpus, opts);
  out << json(corpus_stats(corpus)).dump() << '\n';
  return 0;
}

// ------------------------------------------------------------ match/sample

struct LexiconArgs {
  std::string diseases;
  std::string pests;
};

void add_lexicon_options(CLI::App* cmd, LexiconArgs& a) {
  cmd->add_option("--diseases", a.diseases, "Disease name list, one term per line")
      ->required();
  cmd->add_option("--pests", a.pests, "Pest name list, one term per line")->required();
}

struct MatchArgs {
  std::string corpus;
  LexiconArgs lexicon;
};

int cmd_match(const MatchArgs& a, std::ostream& out, std::ostream&) {
  ReadOptions opts;
  opts.strict_iob2 = false;
  const Corpus corpus = read_corpus_file(a.corpus, opts);
  const HazardLexicon lexicon = load_lexicon_files(a.lexicon.diseases, a.lexicon.pests);
  for (const auto& s : corpus.sentences) {
    out << json{{"sentence", s.id}, {"matches", match_terms(s, lexicon)}}.dump() << '\n';
  }
  return 0;
}

struct SampleArgs {
  std::string pool;
  std::string jsonl;
  LexiconArgs lexicon;
  std::size_t k = 5;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_sample(const SampleArgs& a, std::ostream& out, std::ostream& err) {
  if (a.pool.empty() == a.jsonl.empty()) {
    throw ContractError("give exactly one of --pool or --jsonl");
  }
  Corpus pool;
  if (!a.pool.empty()) {
    ReadOptions opts;
    opts.strict_iob2 = false;
    pool = read_corpus_file(a.pool, opts);
  } else {
    std::ifstream in(a.jsonl, std::ios::binary);
    if (!in) throw Error("cannot open '" + a.jsonl + "'");
    pool = read_tweets_jsonl(in, a.jsonl);
  }
  const HazardLexicon lexicon = load_lexicon_files(a.lexicon.diseases, a.lexicon.pests);
  const Corpus sample = sample_per_hazard(pool, lexicon, a.k, a.seed);
  err << "sampled " << sample.size() << " of " << pool.size() << " tweets\n";
  emit(a.out, out, [&](std::ostream& o) { write_corpus(o, sample); });
  return 0;
}

struct BaselineArgs {
  std::string corpus;
  LexiconArgs lexicon;
  std::string out;
};

int cmd_baseline(const BaselineArgs& a, std::ostream& out, std::ostream&) {
  ReadOptions opts;
  opts.strict_iob2 = false;
  Corpus corpus = read_corpus_file(a.corpus, opts);
  const HazardLexicon lexicon = load_lexicon_files(a.lexicon.diseases, a.lexicon.pests);
  for (auto& s : corpus.sentences) s.labels = baseline_tag(s, lexicon);
  emit(a.out, out, [&](std::ostream& o) { write_corpus(o, corpus); });
  return 0;
}

// ------------------------------------------------------------------- split

struct SplitArgs {
  std::string corpus;
  std::string holdout;
  std::size_t cv_pool = 640;
  std::size_t folds = 5;
  std::uint64_t seed = 0;
  std::string out_dir;
};

int cmd_split(const SplitArgs& a, std::ostream& out, std::ostream&) {
  const Corpus corpus = read_corpus_file(a.corpus);
  SplitSpec spec;
  if (!a.holdout.empty()) {
    std::ifstream in(a.holdout, std::ios::binary);
    if (!in) throw Error("cannot open holdout list '" + a.holdout + "'");
    spec.holdout_terms = read_term_list(in);
  }
  spec.cv_pool_size = a.cv_pool;
  spec.n_folds = a.folds;
  spec.seed = a.seed;
  const SplitResult result = split_corpus(corpus, spec);
  write_split(a.out_dir, result, spec);
  json folds = json::array();
  for (const auto& f : result.folds) {
    folds.push_back({{"train", f.train.size()}, {"validation", f.validation.size()}});
  }
  out << json{{"corpus", corpus.size()},
              {"test", result.test.size()},
              {"cv_pool", spec.cv_pool_size},
              {"appendix", result.appendix_size},
              {"folds", folds},
              {"manifest", (fs::path(a.out_dir) / "manifest.json").string()}}
             .dump()
      << '\n';
  return 0;
}

// ------------------------------------------------------------- embed-synth

struct EmbedArgs {
  std::string corpus;
  std::string vocab;
  std::size_t dim = 64;
  std::uint64_t seed = 0;
  double separability = 1.0;
  std::size_t max_pieces = kDefaultMaxPieces;
  std::string out;
};

int cmd_embed(const EmbedArgs& a, std::ostream& out, std::ostream&) {
  ReadOptions opts;
  opts.strict_iob2 = false;
  const Corpus corpus = read_corpus_file(a.corpus, opts);
  const auto vocab = maybe_vocab(a.vocab);
  const TokenizedCorpus tokens =
      tokenize_corpus(corpus, vocab ? &*vocab : nullptr, a.max_pieces);
  EmbeddingFile file(static_cast<std::uint32_t>(a.dim));
  for (const auto& ts : tokens.sentences) {
    file.add(ts.sentence_id, synthetic_embed(ts, a.dim, a.seed, a.separability));
  }
  write_embeddings_file(a.out, file);
  out << json{{"entries", file.size()},
              {"dim", a.dim},
              {"truncated_sentences", tokens.truncated_count}}
             .dump()
      << '\n';
  return 0;
}

// ------------------------------------------------------------ train/predict

struct TokenArgs {
  std::string vocab;
  std::size_t max_pieces = kDefaultMaxPieces;
};

void add_token_options(CLI::App* cmd, TokenArgs& a) {
  cmd->add_option("--vocab", a.vocab,
                  "Wordpiece vocab; required unless the corpus carries a piece column");
  cmd->add_option("--max-pieces", a.max_pieces, "Maximum pieces per sentence")
      ->capture_default_str();
}

struct TrainArgs {
  std::string corpus;
  std::string embeddings;
  TokenArgs tokens;
  std::string preset = "paper";
  std::optional<double> learning_rate;
  std::size_t epochs = 20;
  std::size_t steps_per_epoch = 16;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_train(const TrainArgs& a, std::ostream& out, std::ostream& err) {
  const Corpus corpus = read_corpus_file(a.corpus);
  const auto vocab = maybe_vocab(a.tokens.vocab);
  const TokenizedCorpus tokens =
      tokenize_corpus(corpus, vocab ? &*vocab : nullptr, a.tokens.max_pieces);
  if (tokens.truncated_count) {
    err << tokens.truncated_count << " sentences truncated to " << a.tokens.max_pieces
        << " pieces\n";
  }
  const EmbeddingFile file = read_embeddings_file(a.embeddings);
  const auto joined = join_embeddings(tokens.sentences, file);
  TrainConfig config = TrainConfig::preset(a.preset);
  if (a.learning_rate) config.learning_rate = *a.learning_rate;
  config.epochs = a.epochs;
  config.steps_per_epoch = a.steps_per_epoch;
  config.seed = a.seed;
  const TrainResult result = train(joined, config);
  write_checkpoint_file(a.out, result.params);
  json history = json::array();
  for (const auto& h : result.history) {
    history.push_back({{"epoch", h.epoch}, {"mean_batch_loss", h.mean_batch_loss}});
  }
  out << json{{"sentences", joined.size()},
              {"batch_size", config.batch_size(joined.size())},
              {"learning_rate", config.learning_rate},
              {"truncated_sentences", tokens.truncated_count},
              {"history", history}}
             .dump()
      << '\n';
  return 0;
}

struct PredictArgs {
  std::string corpus;
  std::string embeddings;
  std::string model;
  TokenArgs tokens;
  std::string out;
  std::string entities;
};

int cmd_predict(const PredictArgs& a, std::ostream& out, std::ostream&) {
  ReadOptions opts;
  opts.strict_iob2 = false;
  Corpus corpus = read_corpus_file(a.corpus, opts);
  const auto vocab = maybe_vocab(a.tokens.vocab);
  const TokenizedCorpus tokens =
      tokenize_corpus(corpus, vocab ? &*vocab : nullptr, a.tokens.max_pieces);
  const EmbeddingFile file = read_embeddings_file(a.embeddings);
  const auto joined = join_embeddings(tokens.sentences, file);
  const ModelParams params = read_checkpoint_file(a.model);
  json entity_lines = json::array();
  for (std::size_t i = 0; i < joined.size(); ++i) {
    Sentence& s = corpus.sentences[i];
    const TokenizedSentence& ts = *joined[i].tokens;
    const Prediction pred = predict(params, *joined[i].embeddings);
    // Words dropped by truncation have no pieces and are written as O.
    std::vector<Label> words = collapse_to_words(pred.labels, ts.word_of_piece);
    words.resize(s.size(), Label::O);
    s.labels = words;
    entity_lines.push_back(
        {{"sentence", s.id},
         {"entities", decode_entities(pred.labels, ts.word_of_piece, s.words)}});
  }
  emit(a.out, out, [&](std::ostream& o) { write_corpus(o, corpus); });
  if (!a.entities.empty()) {
    emit(a.entities, out, [&](std::ostream& o) {
      for (const auto& line : entity_lines) o << line.dump() << '\n';
    });
  }
  return 0;
}

// -------------------------------------------------------------------- eval

struct EvalArgs {
  std::string gold;
  std::string pred;
  TokenArgs tokens;
  std::string out;
};

int cmd_eval(const EvalArgs& a, std::ostream& out, std::ostream&) {
  const Corpus gold = read_corpus_file(a.gold);
  ReadOptions permissive;
  permissive.strict_iob2 = false;
  const Corpus pred = read_corpus_file(a.pred, permissive);
  std::map<std::string, const Sentence*> pred_by_id;
  for (const auto& s : pred.sentences) pred_by_id.emplace(s.id, &s);
  if (pred_by_id.size() != gold.size()) {
    throw IntegrityError("gold has " + std::to_string(gold.size()) +
                         " sentences, predictions have " + std::to_string(pred_by_id.size()));
  }
  const auto vocab = maybe_vocab(a.tokens.vocab);
  const bool piece_level =
      vocab.has_value() ||
      std::all_of(gold.sentences.begin(), gold.sentences.end(),
                  [](const Sentence& s) { return s.has_pieces(); });
  std::vector<Label> gold_labels;
  std::vector<Label> pred_labels;
  EntityScorer entities;
  for (const auto& g : gold.sentences) {
    const auto it = pred_by_id.find(g.id);
    if (it == pred_by_id.end()) throw IntegrityError("no prediction for sentence '" + g.id + "'");
    const Sentence& p = *it->second;
    if (p.words != g.words) {
      throw IntegrityError("sentence '" + g.id + "': predicted words differ from gold");
    }
    entities.add(decode_word_entities(g.labels, g.words),
                 decode_word_entities(p.labels, p.words));
    if (piece_level) {
      const TokenizedSentence ts = g.has_pieces()
                                       ? align_pretokenized(g, a.tokens.max_pieces)
                                       : tokenize_sentence(g, *vocab, a.tokens.max_pieces);
      const auto gp = project_labels(g.labels, ts.word_of_piece);
      const auto pp = project_labels(p.labels, ts.word_of_piece);
      gold_labels.insert(gold_labels.end(), gp.begin(), gp.end());
      pred_labels.insert(pred_labels.end(), pp.begin(), pp.end());
    } else {
      gold_labels.insert(gold_labels.end(), g.labels.begin(), g.labels.end());
      pred_labels.insert(pred_labels.end(), p.labels.begin(), p.labels.end());
    }
  }
  const json report{{"level", piece_level ? "piece" : "word"},
                    {"token", token_metrics(gold_labels, pred_labels)},
                    {"entity", entities.report()}};
  emit(a.out, out, [&](std::ostream& o) { o << report.dump(2) << '\n'; });
  return 0;
}

// -------------------------------------------------------------- grid/report

struct GridArgs {
  std::string manifest;
  std::string out_dir;
  std::optional<std::size_t> jobs;
  std::optional<std::size_t> epoch_window;
};

void write_summary(const std::vector<RunRecord>& records, const SummaryOptions& options,
                   const std::string& out_dir, std::ostream& out, std::ostream& err) {
  const ResultsTable table = summarize(records, options);
  for (const auto& w : table.warnings) err << "warning: " << w << '\n';
  if (!table.rows.empty()) emit_curves(table, out_dir);
  std::ofstream summary(fs::path(out_dir) / "summary.json", std::ios::binary);
  if (!summary) throw Error("cannot write summary.json in '" + out_dir + "'");
  summary << json(table).dump(2) << '\n';
  out << json{{"records", records.size()}, {"rows", table.rows.size()}}.dump() << '\n';
}

int cmd_grid(const GridArgs& a, std::ostream& out, std::ostream& err) {
  const json m = parse_json_file(a.manifest);
  const fs::path root = fs::path(a.manifest).parent_path();
  auto resolve = [&](const std::string& p) { return (root / p).string(); };
  ExperimentGrid grid;
  TrainConfig config;
  std::optional<Vocab> vocab;
  std::size_t max_pieces = kDefaultMaxPieces;
  SummaryOptions summary;
  std::vector<std::pair<std::string, std::string>> model_paths;
  std::string split_path;
  try {
    split_path = resolve(m.at("split_manifest").get<std::string>());
    for (const auto& model : m.at("models")) {
      model_paths.emplace_back(model.at("id").get<std::string>(),
                               resolve(model.at("embeddings").get<std::string>()));
    }
    if (m.contains("sizes")) grid.sizes = m["sizes"].get<std::vector<std::size_t>>();
    grid.master_seed = m.value("master_seed", std::uint64_t{0});
    grid.jobs = m.value("jobs", std::size_t{1});
    config = TrainConfig::preset(m.value("preset", std::string("paper")));
    if (m.contains("learning_rate")) config.learning_rate = m["learning_rate"].get<double>();
    config.epochs = m.value("epochs", std::size_t{20});
    config.steps_per_epoch = m.value("steps_per_epoch", std::size_t{16});
    if (m.contains("vocab")) vocab = read_vocab_file(resolve(m["vocab"].get<std::string>()));
    max_pieces = m.value("max_pieces", kDefaultMaxPieces);
    if (m.contains("epoch_window")) summary.epoch_window = m["epoch_window"].get<std::size_t>();
  } catch (const json::exception& e) {
    throw ParseError(a.manifest + ": " + e.what(), 0);
  }
  if (a.jobs) grid.jobs = *a.jobs;
  if (a.epoch_window) summary.epoch_window = *a.epoch_window;

  const SplitResult split = read_split(split_path);
  std::size_t truncated = 0;
  const TokenIndex tokens = index_tokens(split, vocab ? &*vocab : nullptr, max_pieces, &truncated);
  if (truncated) err << truncated << " sentences truncated to " << max_pieces << " pieces\n";
  std::vector<std::unique_ptr<EmbeddingFile>> files;
  std::map<std::string, const EmbeddingFile*> models;
  for (const auto& [id, path] : model_paths) {
    if (models.count(id)) throw IntegrityError("model '" + id + "' listed twice");
    files.push_back(std::make_unique<EmbeddingFile>(read_embeddings_file(path)));
    models.emplace(id, files.back().get());
    grid.model_ids.push_back(id);
  }

  const GridOutput result = run_grid(split, tokens, models, grid, config);
  fs::create_directories(a.out_dir);
  {
    std::ofstream rec(fs::path(a.out_dir) / "records.jsonl", std::ios::binary);
    if (!rec) throw Error("cannot write records.jsonl in '" + a.out_dir + "'");
    for (const auto& r : result.records) rec << json(r).dump() << '\n';
  }
  json failures = json::array();
  for (const auto& f : result.failures) {
    err << "cell failed: model " << f.model_id << " fold " << f.fold << " size " << f.size
        << ": " << f.reason << '\n';
    failures.push_back(
        {{"model_id", f.model_id}, {"fold", f.fold}, {"size", f.size}, {"reason", f.reason}});
  }
  {
    std::ofstream fail(fs::path(a.out_dir) / "failures.json", std::ios::binary);
    fail << failures.dump(2) << '\n';
  }
  write_summary(result.records, summary, a.out_dir, out, err);
  return result.failures.empty() ? 0 : 1;
}

struct ReportArgs {
  std::string records;
  std::string out_dir;
  std::optional<std::size_t> epoch_window;
};

int cmd_report(const ReportArgs& a, std::ostream& out, std::ostream& err) {
  std::ifstream in(a.records, std::ios::binary);
  if (!in) throw Error("cannot open '" + a.records + "'");
  std::vector<RunRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      records.push_back(json::parse(line).get<RunRecord>());
    } catch (const json::exception& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  SummaryOptions options;
  options.epoch_window = a.epoch_window;
  fs::create_directories(a.out_dir);
  write_summary(records, options, a.out_dir, out, err);
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Few-shot plant-health NER toolkit", "plantner"};
  app.require_subcommand(0, 1);
  bool show_version = false;
  app.add_flag("--version", show_version, "Print tool and file format versions");

  ValidateArgs validate;
  auto* c_validate = app.add_subcommand("validate", "Check IOB2 validity of a corpus");
  c_validate->add_option("--corpus", validate.corpus, "Corpus TSV")->required();

  StatsArgs stats;
  auto* c_stats = app.add_subcommand("stats", "Label and entity counts of a corpus");
  c_stats->add_option("--corpus", stats.corpus, "Corpus TSV")->required();
  c_stats->add_flag("--permissive", stats.permissive, "Accept invalid IOB2");

  MatchArgs match;
  auto* c_match = app.add_subcommand("match", "List lexicon matches per sentence (JSONL)");
  c_match->add_option("--corpus", match.corpus, "Corpus TSV")->required();
  add_lexicon_options(c_match, match.lexicon);

  SampleArgs sample;
  auto* c_sample = app.add_subcommand("sample", "Sample up to k tweets per hazard term");
  c_sample->add_option("--pool", sample.pool, "Pool corpus TSV");
  c_sample->add_option("--jsonl", sample.jsonl, "Pool of raw tweets, JSONL {id,text}");
  add_lexicon_options(c_sample, sample.lexicon);
  c_sample->add_option("--k", sample.k, "Tweets per term")->capture_default_str();
  c_sample->add_option("--seed", sample.seed, "Random seed")->capture_default_str();
  c_sample->add_option("--out", sample.out, "Output corpus TSV (default stdout)");

  BaselineArgs baseline;
  auto* c_baseline = app.add_subcommand("baseline-tag", "Tag a corpus with the lexicon rules");
  c_baseline->add_option("--corpus", baseline.corpus, "Corpus TSV")->required();
  add_lexicon_options(c_baseline, baseline.lexicon);
  c_baseline->add_option("--out", baseline.out, "Output corpus TSV (default stdout)");

  SplitArgs split;
  auto* c_split = app.add_subcommand("split", "Build the unseen-hazard test set and CV folds");
  c_split->add_option("--corpus", split.corpus, "Gold corpus TSV")->required();
  c_split->add_option("--holdout", split.holdout,
                      "Holdout term list (default: built-in hazard list)");
  c_split->add_option("--cv-pool", split.cv_pool, "CV pool size")->capture_default_str();
  c_split->add_option("--folds", split.folds, "Number of folds")->capture_default_str();
  c_split->add_option("--seed", split.seed, "Random seed")->capture_default_str();
  c_split->add_option("--out-dir", split.out_dir, "Output directory")->required();

  EmbedArgs embed;
  auto* c_embed = app.add_subcommand("embed-synth", "Write synthetic piece embeddings");
  c_embed->add_option("--corpus", embed.corpus, "Corpus TSV")->required();
  c_embed->add_option("--vocab", embed.vocab,
                      "Wordpiece vocab; required unless the corpus carries a piece column");
  c_embed->add_option("--dim", embed.dim, "Embedding width (>= 8)")->capture_default_str();
  c_embed->add_option("--seed", embed.seed, "Noise seed")->capture_default_str();
  c_embed->add_option("--separability", embed.separability, "Label signal in [0, 1]")
      ->capture_default_str();
  c_embed->add_option("--max-pieces", embed.max_pieces, "Maximum pieces per sentence")
      ->capture_default_str();
  c_embed->add_option("--out", embed.out, "Output embedding file")->required();

  TrainArgs tr;
  auto* c_train = app.add_subcommand("train", "Train the linear head");
  c_train->add_option("--corpus", tr.corpus, "Training corpus TSV")->required();
  c_train->add_option("--embeddings", tr.embeddings, "Embedding file")->required();
  add_token_options(c_train, tr.tokens);
  c_train->add_option("--preset", tr.preset, "paper (lr 5e-5) or head (lr 1e-2)")
      ->capture_default_str();
  c_train->add_option("--learning-rate", tr.learning_rate, "Override the preset rate");
  c_train->add_option("--epochs", tr.epochs, "Epochs")->capture_default_str();
  c_train->add_option("--steps-per-epoch", tr.steps_per_epoch, "Optimizer steps per epoch")
      ->capture_default_str();
  c_train->add_option("--seed", tr.seed, "Random seed")->capture_default_str();
  c_train->add_option("--out", tr.out, "Output checkpoint")->required();

  PredictArgs pr;
  auto* c_predict = app.add_subcommand("predict", "Label a corpus with a trained head");
  c_predict->add_option("--corpus", pr.corpus, "Corpus TSV")->required();
  c_predict->add_option("--embeddings", pr.embeddings, "Embedding file")->required();
  c_predict->add_option("--model", pr.model, "Checkpoint")->required();
  add_token_options(c_predict, pr.tokens);
  c_predict->add_option("--out", pr.out, "Predicted corpus TSV (default stdout)");
  c_predict->add_option("--entities", pr.entities, "Decoded entities, JSONL");

  EvalArgs ev;
  auto* c_eval = app.add_subcommand("eval", "Score predictions against gold labels");
  c_eval->add_option("--gold", ev.gold, "Gold corpus TSV")->required();
  c_eval->add_option("--pred", ev.pred, "Predicted corpus TSV")->required();
  add_token_options(c_eval, ev.tokens);
  c_eval->add_option("--out", ev.out, "JSON report (default stdout)");

  GridArgs gr;
  auto* c_grid = app.add_subcommand("grid", "Run a learning-curve experiment grid");
  c_grid->add_option("--manifest", gr.manifest, "Grid manifest JSON")->required();
  c_grid->add_option("--out-dir", gr.out_dir, "Output directory")->required();
  c_grid->add_option("--jobs", gr.jobs, "Cells run concurrently");
  c_grid->add_option("--epoch-window", gr.epoch_window, "Select only among epochs 1..N");

  ReportArgs rp;
  auto* c_report = app.add_subcommand("report", "Summarize records.jsonl into curves");
  c_report->add_option("--records", rp.records, "records.jsonl")->required();
  c_report->add_option("--out-dir", rp.out_dir, "Output directory")->required();
  c_report->add_option("--epoch-window", rp.epoch_window, "Select only among epochs 1..N");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    err << app.help();
    return 2;
  }
  if (show_version) {
    out << version_text() << '\n';
    return 0;
  }
  if (app.get_subcommands().empty()) {
    err << "error: a subcommand is required\n" << app.help();
    return 2;
  }

  try {
    if (c_validate->parsed()) return cmd_validate(validate, out, err);
    if (c_stats->parsed()) return cmd_stats(stats, out, err);
    if (c_match->parsed()) return cmd_match(match, out, err);
    if (c_sample->parsed()) return cmd_sample(sample, out, err);
    if (c_baseline->parsed()) return cmd_baseline(baseline, out, err);
    if (c_split->parsed()) return cmd_split(split, out, err);
    if (c_embed->parsed()) return cmd_embed(embed, out, err);
    if (c_train->parsed()) return cmd_train(tr, out, err);
    if (c_predict->parsed()) return cmd_predict(pr, out, err);
    if (c_eval->parsed()) return cmd_eval(ev, out, err);
    if (c_grid->parsed()) return cmd_grid(gr, out, err);
    if (c_report->parsed()) return cmd_report(rp, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace plantner
