#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "plantner/tokenization.hpp"

namespace plantner {

inline constexpr std::string_view kEmbeddingMagic = "PWEMB001";

// n_pieces x dim row-major block of 32-bit floats; row i belongs to piece i.
class EmbeddingMatrix {
 public:
  EmbeddingMatrix() = default;
  EmbeddingMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), values_(rows * cols, 0.0f) {}
  EmbeddingMatrix(std::size_t rows, std::size_t cols, std::vector<float> values);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::span<const float> row(std::size_t i) const {
    return {values_.data() + i * cols_, cols_};
  }
  std::span<float> row(std::size_t i) { return {values_.data() + i * cols_, cols_}; }
  const std::vector<float>& values() const { return values_; }
  bool all_finite() const;

  bool operator==(const EmbeddingMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<float> values_;
};

class EmbeddingFile {
 public:
  explicit EmbeddingFile(std::uint32_t dim);

  // Throws IntegrityError on a duplicate id, ContractError on a column count
  // other than dim().
  void add(std::string id, EmbeddingMatrix matrix);

  std::uint32_t dim() const { return dim_; }
  std::size_t size() const { return entries_.size(); }
  const EmbeddingMatrix* find(const std::string& id) const;
  const std::vector<std::pair<std::string, EmbeddingMatrix>>& entries() const {
    return entries_;
  }

 private:
  std::uint32_t dim_;
  std::vector<std::pair<std::string, EmbeddingMatrix>> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Layout: magic, u32 dim, u32 count, then per entry u16 id length, id bytes,
// u32 n_pieces, n_pieces*dim f32. All integers and floats little-endian.
void write_embeddings(std::ostream& out, const EmbeddingFile& file);
EmbeddingFile read_embeddings(std::istream& in);
void write_embeddings_file(const std::string& path, const EmbeddingFile& file);
EmbeddingFile read_embeddings_file(const std::string& path);

// Amplitude of the class prototype blocks and half-width of the per-piece
// hash noise used by synthetic_embed.
inline constexpr float kSyntheticSignal = 1.0f;
inline constexpr float kSyntheticNoise = 0.5f;

// Deterministic stand-in for an encoder. Row i is
//   separability * prototype(gold label of piece i) + noise(piece string)
// where prototype(l) fills coordinate block l (block width dim/8) with
// kSyntheticSignal, and the noise is uniform in [-kSyntheticNoise,
// kSyntheticNoise) drawn from a hash of (seed, piece string, coordinate).
EmbeddingMatrix synthetic_embed(const TokenizedSentence& ts, std::size_t dim,
                                std::uint64_t seed, double separability);

// A tokenized sentence paired with its embedding rows. Both referents must
// outlive the pairing.
struct JoinedSentence {
  const TokenizedSentence* tokens;
  const EmbeddingMatrix* embeddings;
};

// Pairs every sentence with its matrix. Throws JoinError when an id is absent
// or a row count differs from the piece count.
std::vector<JoinedSentence> join_embeddings(
    const std::vector<TokenizedSentence>& sentences, const EmbeddingFile& file);

}  // namespace plantner
