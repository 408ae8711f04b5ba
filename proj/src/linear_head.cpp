#include "plantner/linear_head.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "binary_io.hpp"
#include "plantner/error.hpp"
#include "plantner/random.hpp"

namespace plantner {

ModelParams init_params(std::size_t dim, std::uint64_t seed) {
  ModelParams p(dim);
  Rng rng(seed);
  for (double& w : p.weights) w = rng.uniform(-0.02, 0.02);
  for (double& b : p.bias) b = rng.uniform(-0.02, 0.02);
  return p;
}

TrainConfig TrainConfig::preset(std::string_view name) {
  if (name == "paper") return paper();
  if (name == "head") return head();
  throw ContractError("unknown training preset '" + std::string(name) +
                      "' (expected paper or head)");
}

std::size_t TrainConfig::batch_size(std::size_t n_sentences) const {
  return std::max<std::size_t>(1, n_sentences / std::max<std::size_t>(1, steps_per_epoch));
}

std::array<double, kNumLabels> logits(const ModelParams& params,
                                      std::span<const float> x) {
  std::array<double, kNumLabels> z = params.bias;
  for (std::size_t l = 0; l < kNumLabels; ++l) {
    const double* w = params.weights.data() + l * params.dim;
    double acc = 0.0;
    for (std::size_t j = 0; j < params.dim; ++j) acc += w[j] * static_cast<double>(x[j]);
    z[l] += acc;
  }
  return z;
}

namespace {

// In-place softmax; returns log-sum-exp of the input.
double softmax(std::array<double, kNumLabels>& z) {
  const double top = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (double& v : z) {
    v = std::exp(v - top);
    sum += v;
  }
  for (double& v : z) v /= sum;
  return top + std::log(sum);
}

}  // namespace

Label argmax_label(std::span<const double> scores) {
  std::size_t best = 0;
  for (std::size_t l = 1; l < scores.size(); ++l) {
    if (scores[l] > scores[best]) best = l;
  }
  return label_at(best);
}

LossAndGradient loss_and_gradient(const ModelParams& params,
                                  std::span<const LabeledPiece> batch) {
  if (batch.empty()) throw ContractError("loss_and_gradient: empty batch");
  LossAndGradient out;
  out.grad = ModelParams(params.dim);
  const double scale = 1.0 / static_cast<double>(batch.size());
  for (const auto& piece : batch) {
    if (piece.x.size() != params.dim) {
      throw ContractError("embedding width " + std::to_string(piece.x.size()) +
                          " does not match model dim " + std::to_string(params.dim));
    }
    for (float v : piece.x) {
      if (!std::isfinite(v)) throw DataError("non-finite embedding value in batch");
    }
    auto z = logits(params, piece.x);
    const std::size_t gold = index_of(piece.gold);
    const double gold_logit = z[gold];
    const double lse = softmax(z);
    out.loss += (lse - gold_logit) * scale;
    for (std::size_t l = 0; l < kNumLabels; ++l) {
      const double delta = (z[l] - (l == gold ? 1.0 : 0.0)) * scale;
      out.grad.bias[l] += delta;
      double* g = out.grad.weights.data() + l * params.dim;
      for (std::size_t j = 0; j < params.dim; ++j) g[j] += delta * piece.x[j];
    }
  }
  return out;
}

std::vector<LabeledPiece> labeled_pieces(std::span<const JoinedSentence> data) {
  std::vector<LabeledPiece> pieces;
  for (const auto& s : data) {
    for (std::size_t p = 0; p < s.tokens->size(); ++p) {
      pieces.push_back({s.embeddings->row(p), s.tokens->piece_labels[p]});
    }
  }
  return pieces;
}

namespace {

class Adam {
 public:
  Adam(std::size_t n, const AdamConfig& config, double lr)
      : config_(config), lr_(lr), m_(n, 0.0), v_(n, 0.0) {}

  void step(ModelParams& params, const ModelParams& grad) {
    ++t_;
    const double c1 = 1.0 - std::pow(config_.beta1, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(config_.beta2, static_cast<double>(t_));
    std::size_t k = 0;
    auto update = [&](double& p, double g) {
      m_[k] = config_.beta1 * m_[k] + (1.0 - config_.beta1) * g;
      v_[k] = config_.beta2 * v_[k] + (1.0 - config_.beta2) * g * g;
      const double m_hat = m_[k] / c1;
      const double v_hat = v_[k] / c2;
      p -= lr_ * m_hat / (std::sqrt(v_hat) + config_.epsilon);
      ++k;
    };
    for (std::size_t i = 0; i < params.weights.size(); ++i) {
      update(params.weights[i], grad.weights[i]);
    }
    for (std::size_t l = 0; l < kNumLabels; ++l) update(params.bias[l], grad.bias[l]);
  }

 private:
  AdamConfig config_;
  double lr_;
  std::vector<double> m_;
  std::vector<double> v_;
  std::size_t t_ = 0;
};

}  // namespace

TrainResult train(std::span<const JoinedSentence> data, const TrainConfig& config,
                  const EpochHook& hook) {
  if (config.epochs < 1) throw ContractError("epochs must be at least 1");
  if (config.steps_per_epoch < 1) throw ContractError("steps_per_epoch must be at least 1");
  if (!(config.learning_rate >= 0.0)) throw ContractError("learning rate must be >= 0");
  if (data.empty()) throw ContractError("train: no training sentences");
  std::size_t total_pieces = 0;
  for (const auto& s : data) total_pieces += s.tokens->size();
  if (total_pieces == 0) throw SizingError("train: no trainable pieces");
  const std::size_t dim = data.front().embeddings->cols();

  TrainResult result;
  result.params = init_params(dim, SeedBuilder(config.seed).add("init").seed());
  Rng batches(SeedBuilder(config.seed).add("batches").seed());
  Adam adam(result.params.parameter_count(), config.adam, config.learning_rate);
  const std::size_t batch_size = std::min(config.batch_size(data.size()), data.size());

  std::vector<LabeledPiece> batch;
  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    double loss_sum = 0.0;
    std::size_t loss_steps = 0;
    for (std::size_t step = 0; step < config.steps_per_epoch; ++step) {
      batch.clear();
      for (std::size_t i : batches.sample(data.size(), batch_size)) {
        const auto& s = data[i];
        for (std::size_t p = 0; p < s.tokens->size(); ++p) {
          batch.push_back({s.embeddings->row(p), s.tokens->piece_labels[p]});
        }
      }
      if (batch.empty()) continue;
      const auto lg = loss_and_gradient(result.params, batch);
      loss_sum += lg.loss;
      ++loss_steps;
      adam.step(result.params, lg.grad);
    }
    result.history.push_back(
        {epoch, loss_steps ? loss_sum / static_cast<double>(loss_steps) : 0.0});
    if (hook) hook(epoch, result.params);
  }
  return result;
}

Prediction predict(const ModelParams& params, const EmbeddingMatrix& embeddings) {
  if (embeddings.cols() != params.dim) {
    throw ContractError("embedding width " + std::to_string(embeddings.cols()) +
                        " does not match model dim " + std::to_string(params.dim));
  }
  Prediction out;
  out.probs.reserve(embeddings.rows());
  out.labels.reserve(embeddings.rows());
  for (std::size_t r = 0; r < embeddings.rows(); ++r) {
    auto z = logits(params, embeddings.row(r));
    out.labels.push_back(argmax_label(z));
    softmax(z);
    out.probs.push_back(z);
  }
  return out;
}

void write_checkpoint(std::ostream& out, const ModelParams& params) {
  out.write(kCheckpointMagic.data(), static_cast<std::streamsize>(kCheckpointMagic.size()));
  detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(params.dim));
  for (double w : params.weights) detail::put_f32(out, static_cast<float>(w));
  for (double b : params.bias) detail::put_f32(out, static_cast<float>(b));
}

ModelParams read_checkpoint(std::istream& in) {
  detail::expect_magic(in, kCheckpointMagic);
  const auto dim = detail::get_le<std::uint32_t>(in, "dim");
  if (dim == 0) throw CorruptionError("checkpoint declares dim 0");
  ModelParams p(dim);
  for (double& w : p.weights) w = detail::get_f32(in, "weights");
  for (double& b : p.bias) b = detail::get_f32(in, "bias");
  for (double w : p.weights) {
    if (!std::isfinite(w)) throw CorruptionError("non-finite checkpoint weight");
  }
  for (double b : p.bias) {
    if (!std::isfinite(b)) throw CorruptionError("non-finite checkpoint bias");
  }
  if (!detail::at_eof(in)) throw CorruptionError("trailing bytes after checkpoint");
  return p;
}

void write_checkpoint_file(const std::string& path, const ModelParams& params) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write checkpoint '" + path + "'");
  write_checkpoint(out, params);
  if (!out) throw Error("error while writing '" + path + "'");
}

ModelParams read_checkpoint_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open checkpoint '" + path + "'");
  return read_checkpoint(in);
}

}  // namespace plantner
