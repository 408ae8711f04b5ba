#include "plantner/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

#include "plantner/error.hpp"
#include "plantner/random.hpp"

namespace plantner {

std::string_view split_name(EvalSplit s) {
  return s == EvalSplit::Validation ? "validation" : "test";
}

std::optional<EvalSplit> parse_split(std::string_view name) {
  if (name == "validation") return EvalSplit::Validation;
  if (name == "test") return EvalSplit::Test;
  return std::nullopt;
}

std::uint64_t sample_seed(std::uint64_t master_seed, std::size_t fold) {
  return SeedBuilder(master_seed).add("few-shot-sample").add(fold).seed();
}

std::uint64_t cell_seed(std::uint64_t master_seed, const std::string& model_id,
                        std::size_t fold, std::size_t size) {
  return SeedBuilder(master_seed).add(model_id).add(fold).add(size).seed();
}

TokenIndex index_tokens(const SplitResult& split, const Vocab* vocab,
                        std::size_t max_pieces, std::size_t* truncated_count) {
  TokenIndex index;
  std::size_t truncated = 0;
  auto add_all = [&](const Corpus& corpus) {
    for (const auto& s : corpus.sentences) {
      if (index.count(s.id)) continue;
      TokenizedSentence ts;
      if (s.has_pieces()) {
        ts = align_pretokenized(s, max_pieces);
      } else if (vocab) {
        ts = tokenize_sentence(s, *vocab, max_pieces);
      } else {
        throw ContractError("sentence '" + s.id +
                            "' is not pre-tokenized and no vocab was given");
      }
      if (ts.truncated) ++truncated;
      index.emplace(s.id, std::move(ts));
    }
  };
  add_all(split.test);
  for (const auto& fold : split.folds) {
    add_all(fold.train);
    add_all(fold.validation);
  }
  if (truncated_count) *truncated_count = truncated;
  return index;
}

EvalReport evaluate_pieces(const ModelParams& params,
                           const std::vector<JoinedSentence>& data) {
  ConfusionMatrix cm;
  for (const auto& s : data) {
    for (std::size_t p = 0; p < s.tokens->size(); ++p) {
      const auto z = logits(params, s.embeddings->row(p));
      cm.add(s.tokens->piece_labels[p], argmax_label(z));
    }
  }
  return report_from_confusion(cm);
}

namespace {

struct Cell {
  std::string model_id;
  std::size_t fold;
  std::size_t size;
};

struct CellResult {
  std::vector<RunRecord> records;
  std::optional<CellFailure> failure;
};

std::vector<TokenizedSentence> lookup(const Corpus& corpus, const TokenIndex& tokens) {
  std::vector<TokenizedSentence> out;
  out.reserve(corpus.size());
  for (const auto& s : corpus.sentences) {
    const auto it = tokens.find(s.id);
    if (it == tokens.end()) throw JoinError("sentence '" + s.id + "' was not tokenized");
    out.push_back(it->second);
  }
  return out;
}

CellResult run_cell(const Cell& cell, const SplitResult& split, const TokenIndex& tokens,
                    const EmbeddingFile& embeddings, const ExperimentGrid& grid,
                    const TrainConfig& base_config) {
  CellResult result;
  try {
    const Fold& fold = split.folds[cell.fold];
    const Corpus sample =
        sample_few_shot(fold.train, cell.size, sample_seed(grid.master_seed, cell.fold));
    const auto train_tokens = lookup(sample, tokens);
    const auto val_tokens = lookup(fold.validation, tokens);
    const auto test_tokens = lookup(split.test, tokens);
    const auto train_data = join_embeddings(train_tokens, embeddings);
    const auto val_data = join_embeddings(val_tokens, embeddings);
    const auto test_data = join_embeddings(test_tokens, embeddings);

    TrainConfig config = base_config;
    config.seed = cell_seed(grid.master_seed, cell.model_id, cell.fold, cell.size);
    auto record = [&](std::size_t epoch, EvalSplit s, EvalReport report) {
      result.records.push_back(
          {cell.model_id, cell.fold, cell.size, epoch, s, std::move(report)});
    };
    train(train_data, config, [&](std::size_t epoch, const ModelParams& params) {
      record(epoch, EvalSplit::Validation, evaluate_pieces(params, val_data));
      record(epoch, EvalSplit::Test, evaluate_pieces(params, test_data));
    });
  } catch (const Error& e) {
    result.records.clear();
    result.failure = CellFailure{cell.model_id, cell.fold, cell.size, e.what()};
  }
  return result;
}

}  // namespace

GridOutput run_grid(const SplitResult& split, const TokenIndex& tokens,
                    const std::map<std::string, const EmbeddingFile*>& models,
                    const ExperimentGrid& grid, const TrainConfig& train_config) {
  if (grid.model_ids.empty()) throw ContractError("grid has no models");
  if (grid.sizes.empty()) throw ContractError("grid has no few-shot sizes");
  if (!std::is_sorted(grid.sizes.begin(), grid.sizes.end())) {
    throw ContractError("grid sizes must be sorted ascending");
  }
  if (split.folds.empty()) throw ContractError("split has no folds");
  for (const auto& fold : split.folds) {
    if (grid.sizes.back() > fold.train.size()) {
      throw ContractError("grid size " + std::to_string(grid.sizes.back()) +
                          " exceeds a fold train set of " +
                          std::to_string(fold.train.size()));
    }
  }
  for (const auto& id : grid.model_ids) {
    const auto it = models.find(id);
    if (it == models.end() || it->second == nullptr) {
      throw ContractError("no embedding file for model '" + id + "'");
    }
  }

  std::vector<Cell> cells;
  for (const auto& id : grid.model_ids) {
    for (std::size_t f = 0; f < split.folds.size(); ++f) {
      for (std::size_t size : grid.sizes) cells.push_back({id, f, size});
    }
  }
  std::vector<CellResult> results(cells.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr fatal;
  std::mutex fatal_mutex;
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      try {
        results[i] = run_cell(cells[i], split, tokens, *models.at(cells[i].model_id),
                              grid, train_config);
      } catch (...) {
        std::lock_guard lock(fatal_mutex);
        if (!fatal) fatal = std::current_exception();
      }
    }
  };
  const std::size_t jobs = std::clamp<std::size_t>(grid.jobs, 1, cells.size());
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (std::size_t t = 0; t < jobs; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  if (fatal) std::rethrow_exception(fatal);

  GridOutput out;
  for (auto& r : results) {
    if (r.failure) out.failures.push_back(std::move(*r.failure));
    for (auto& rec : r.records) out.records.push_back(std::move(rec));
  }
  return out;
}

MeanStd mean_std(const std::vector<double>& values) {
  MeanStd out;
  if (values.empty()) return out;
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return out;
}

ResultsTable summarize(const std::vector<RunRecord>& records,
                       const SummaryOptions& options) {
  using CellKey = std::tuple<std::string, std::size_t, std::size_t>;
  struct EpochReports {
    const EvalReport* validation = nullptr;
    const EvalReport* test = nullptr;
  };
  std::map<CellKey, std::map<std::size_t, EpochReports>> cells;
  for (const auto& r : records) {
    auto& slot = cells[{r.model_id, r.fold, r.size}][r.epoch];
    (r.split == EvalSplit::Validation ? slot.validation : slot.test) = &r.report;
  }

  struct Values {
    std::vector<double> weighted, maladie, ravageur;
  };
  using RowKey = std::tuple<std::string, std::size_t, EvalSplit>;
  std::map<RowKey, Values> rows;
  ResultsTable table;
  auto describe = [](const CellKey& k) {
    return "model " + std::get<0>(k) + " fold " + std::to_string(std::get<1>(k)) +
           " size " + std::to_string(std::get<2>(k));
  };
  auto push = [&](const RowKey& key, const EvalReport& report) {
    auto& v = rows[key];
    v.weighted.push_back(report.weighted.f1);
    v.maladie.push_back(report.per_entity_class[index_of(EntityKind::Maladie)].f1);
    v.ravageur.push_back(report.per_entity_class[index_of(EntityKind::Ravageur)].f1);
  };

  for (const auto& [key, epochs] : cells) {
    std::optional<std::size_t> best;
    double best_f1 = 0.0;
    for (const auto& [epoch, reports] : epochs) {
      if (options.epoch_window && epoch > *options.epoch_window) break;
      if (!reports.validation) continue;
      if (!best || reports.validation->weighted.f1 > best_f1) {
        best = epoch;
        best_f1 = reports.validation->weighted.f1;
      }
    }
    if (!best) {
      table.warnings.push_back(describe(key) + ": no validation records, cell omitted");
      continue;
    }
    const auto& [model_id, fold, size] = key;
    table.selections.push_back({model_id, fold, size, *best, best_f1});
    const auto& chosen = epochs.at(*best);
    push({model_id, size, EvalSplit::Validation}, *chosen.validation);
    if (chosen.test) {
      push({model_id, size, EvalSplit::Test}, *chosen.test);
    } else {
      table.warnings.push_back(describe(key) + ": no test record at selected epoch " +
                               std::to_string(*best));
    }
  }

  for (const auto& [key, v] : rows) {
    const auto& [model_id, size, split] = key;
    table.rows.push_back({model_id, size, split, v.weighted.size(), mean_std(v.weighted),
                          mean_std(v.maladie), mean_std(v.ravageur)});
  }
  return table;
}

std::string curve_file_name(CurveMetric metric) {
  switch (metric) {
    case CurveMetric::WeightedF1:
      return "weighted_f1.csv";
    case CurveMetric::PestF1:
      return "pest_f1.csv";
    case CurveMetric::DiseaseF1:
      return "disease_f1.csv";
  }
  return {};
}

std::vector<CurvePoint> curve_points(const ResultsTable& table, CurveMetric metric) {
  std::vector<CurvePoint> points;
  for (const auto& row : table.rows) {
    const MeanStd& v = metric == CurveMetric::WeightedF1 ? row.weighted_f1
                       : metric == CurveMetric::PestF1   ? row.ravageur_f1
                                                         : row.maladie_f1;
    points.push_back({row.model_id, row.size, row.split, v.mean, v.std});
  }
  return points;
}

namespace {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string curve_csv(const ResultsTable& table, CurveMetric metric) {
  std::string out = "model_id,size,split,mean,std\n";
  for (const auto& p : curve_points(table, metric)) {
    out += p.model_id + ',' + std::to_string(p.size) + ',' +
           std::string(split_name(p.split)) + ',' + format_double(p.mean) + ',' +
           format_double(p.std) + '\n';
  }
  return out;
}

std::vector<CurvePoint> parse_curve_csv(const std::string& text) {
  std::vector<CurvePoint> points;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 || line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) f.push_back(field);
    if (f.size() != 5) throw ParseError("expected 5 CSV fields", line_no);
    CurvePoint p;
    p.model_id = f[0];
    auto num = [&](const std::string& s, auto& value) {
      const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
      if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw ParseError("bad number '" + s + "'", line_no);
      }
    };
    num(f[1], p.size);
    const auto split = parse_split(f[2]);
    if (!split) throw ParseError("bad split '" + f[2] + "'", line_no);
    p.split = *split;
    num(f[3], p.mean);
    num(f[4], p.std);
    points.push_back(std::move(p));
  }
  return points;
}

void emit_curves(const ResultsTable& table, const std::string& dir) {
  std::filesystem::create_directories(dir);
  for (CurveMetric m : {CurveMetric::WeightedF1, CurveMetric::PestF1, CurveMetric::DiseaseF1}) {
    const auto path = std::filesystem::path(dir) / curve_file_name(m);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << curve_csv(table, m);
  }
}

}  // namespace plantner
