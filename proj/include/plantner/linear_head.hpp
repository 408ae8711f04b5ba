#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "plantner/embeddings.hpp"
#include "plantner/labels.hpp"

namespace plantner {

inline constexpr std::string_view kCheckpointMagic = "PWLIN001";

// Affine map from a dim-wide piece embedding to five label logits.
struct ModelParams {
  std::size_t dim = 0;
  std::vector<double> weights;  // kNumLabels x dim, row-major
  std::array<double, kNumLabels> bias{};

  ModelParams() = default;
  explicit ModelParams(std::size_t d) : dim(d), weights(kNumLabels * d, 0.0) {}

  double& w(std::size_t label, std::size_t j) { return weights[label * dim + j]; }
  double w(std::size_t label, std::size_t j) const { return weights[label * dim + j]; }
  std::size_t parameter_count() const { return weights.size() + bias.size(); }

  bool operator==(const ModelParams&) const = default;
};

// W and b drawn uniformly from [-0.02, 0.02).
ModelParams init_params(std::size_t dim, std::uint64_t seed);

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct TrainConfig {
  double learning_rate = 5e-5;
  std::size_t epochs = 20;
  std::size_t steps_per_epoch = 16;
  std::uint64_t seed = 0;
  AdamConfig adam;

  // Learning rate used for full encoder fine-tuning.
  static TrainConfig paper() { return TrainConfig{}; }
  // Larger step suited to training the head alone on frozen embeddings.
  static TrainConfig head() {
    TrainConfig c;
    c.learning_rate = 1e-2;
    return c;
  }
  // "paper" or "head"; throws ContractError otherwise.
  static TrainConfig preset(std::string_view name);

  // Sentences per step: floor(n / steps_per_epoch), at least one.
  std::size_t batch_size(std::size_t n_sentences) const;
};

struct LabeledPiece {
  std::span<const float> x;
  Label gold;
};

struct LossAndGradient {
  double loss = 0.0;
  ModelParams grad;
};

// Mean cross-entropy of softmax(Wx + b) over the batch and its exact gradient.
LossAndGradient loss_and_gradient(const ModelParams& params,
                                  std::span<const LabeledPiece> batch);

// Every piece of every sentence, gold labels attached.
std::vector<LabeledPiece> labeled_pieces(std::span<const JoinedSentence> data);

struct EpochStats {
  std::size_t epoch = 0;  // 1-based
  double mean_batch_loss = 0.0;
};

struct TrainResult {
  ModelParams params;
  std::vector<EpochStats> history;
};

// Called after every epoch with the current parameters.
using EpochHook = std::function<void(std::size_t epoch, const ModelParams&)>;

// Adam over epochs x steps_per_epoch steps. Each step draws batch_size
// distinct sentences; draws are independent across steps.
TrainResult train(std::span<const JoinedSentence> data, const TrainConfig& config,
                  const EpochHook& hook = {});

struct Prediction {
  std::vector<std::array<double, kNumLabels>> probs;
  std::vector<Label> labels;
};

// Softmax probabilities per row; argmax ties go to the lowest label index.
Prediction predict(const ModelParams& params, const EmbeddingMatrix& embeddings);
std::array<double, kNumLabels> logits(const ModelParams& params,
                                      std::span<const float> x);
Label argmax_label(std::span<const double> scores);

// Magic, u32 dim, then W row-major and b as little-endian f32.
void write_checkpoint(std::ostream& out, const ModelParams& params);
ModelParams read_checkpoint(std::istream& in);
void write_checkpoint_file(const std::string& path, const ModelParams& params);
ModelParams read_checkpoint_file(const std::string& path);

}  // namespace plantner
