#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "plantner/dataset_split.hpp"
#include "plantner/embeddings.hpp"
#include "plantner/evaluation.hpp"
#include "plantner/linear_head.hpp"
#include "plantner/tokenization.hpp"

namespace plantner {

enum class EvalSplit { Validation, Test };

std::string_view split_name(EvalSplit s);
std::optional<EvalSplit> parse_split(std::string_view name);

inline const std::vector<std::size_t> kDefaultGridSizes = {16, 32, 64, 128, 256, 512};

struct ExperimentGrid {
  std::vector<std::string> model_ids;
  std::vector<std::size_t> sizes = kDefaultGridSizes;
  std::uint64_t master_seed = 0;
  // Cells are independent; this only sets how many run at once.
  std::size_t jobs = 1;
};

// Seed shared by every model and size of one fold, so few-shot samples are
// nested across sizes and identical across models.
std::uint64_t sample_seed(std::uint64_t master_seed, std::size_t fold);
// Training seed (initialization and batch draws) of one cell.
std::uint64_t cell_seed(std::uint64_t master_seed, const std::string& model_id,
                        std::size_t fold, std::size_t size);

struct RunRecord {
  std::string model_id;
  std::size_t fold = 0;
  std::size_t size = 0;
  std::size_t epoch = 0;  // 1-based
  EvalSplit split = EvalSplit::Validation;
  EvalReport report;

  bool operator==(const RunRecord&) const = default;
};

struct CellFailure {
  std::string model_id;
  std::size_t fold = 0;
  std::size_t size = 0;
  std::string reason;
};

struct GridOutput {
  std::vector<RunRecord> records;
  std::vector<CellFailure> failures;
};

// Tokenizations of every sentence the grid may touch, keyed by sentence id.
using TokenIndex = std::unordered_map<std::string, TokenizedSentence>;

TokenIndex index_tokens(const SplitResult& split, const Vocab* vocab,
                        std::size_t max_pieces, std::size_t* truncated_count = nullptr);

// Trains one head per (model, fold, size) and evaluates it on the fold's
// validation set and on the test set after every epoch. Records come back
// ordered by (model order, fold, size, epoch, split) whatever the job count.
// Cells whose data cannot be joined are reported in `failures` and skipped.
GridOutput run_grid(const SplitResult& split, const TokenIndex& tokens,
                    const std::map<std::string, const EmbeddingFile*>& models,
                    const ExperimentGrid& grid, const TrainConfig& train_config);

// Scores a trained head on joined sentences, pooling all pieces.
EvalReport evaluate_pieces(const ModelParams& params,
                           const std::vector<JoinedSentence>& data);

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation, 0 for a single value

  bool operator==(const MeanStd&) const = default;
};

MeanStd mean_std(const std::vector<double>& values);

struct ResultRow {
  std::string model_id;
  std::size_t size = 0;
  EvalSplit split = EvalSplit::Validation;
  std::size_t n_folds = 0;
  MeanStd weighted_f1;
  MeanStd maladie_f1;
  MeanStd ravageur_f1;
};

struct EpochSelection {
  std::string model_id;
  std::size_t fold = 0;
  std::size_t size = 0;
  std::size_t epoch = 0;
  double validation_weighted_f1 = 0.0;
};

struct ResultsTable {
  std::vector<ResultRow> rows;  // sorted by (model_id, size, split)
  std::vector<EpochSelection> selections;
  std::vector<std::string> warnings;
};

struct SummaryOptions {
  // Only epochs 1..epoch_window take part in selection.
  std::optional<std::size_t> epoch_window;
};

// Picks, per (model, fold, size), the epoch with the highest validation
// weighted F1 (earliest on ties) and reports validation and test metrics at
// that epoch, averaged over folds.
ResultsTable summarize(const std::vector<RunRecord>& records,
                       const SummaryOptions& options = {});

enum class CurveMetric { WeightedF1, PestF1, DiseaseF1 };

struct CurvePoint {
  std::string model_id;
  std::size_t size = 0;
  EvalSplit split = EvalSplit::Validation;
  double mean = 0.0;
  double std = 0.0;

  bool operator==(const CurvePoint&) const = default;
};

std::string curve_file_name(CurveMetric metric);
std::vector<CurvePoint> curve_points(const ResultsTable& table, CurveMetric metric);
// Header `model_id,size,split,mean,std`; numbers in shortest round-trip form.
std::string curve_csv(const ResultsTable& table, CurveMetric metric);
std::vector<CurvePoint> parse_curve_csv(const std::string& text);

// Writes weighted_f1.csv, pest_f1.csv and disease_f1.csv into `dir`.
void emit_curves(const ResultsTable& table, const std::string& dir);

}  // namespace plantner
