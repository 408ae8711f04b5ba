#include "plantner/embeddings.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "binary_io.hpp"
#include "plantner/error.hpp"
#include "plantner/random.hpp"

namespace plantner {

EmbeddingMatrix::EmbeddingMatrix(std::size_t rows, std::size_t cols,
                                 std::vector<float> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows_ * cols_) {
    throw ContractError("embedding matrix: " + std::to_string(values_.size()) +
                        " values for a " + std::to_string(rows_) + "x" +
                        std::to_string(cols_) + " shape");
  }
}

bool EmbeddingMatrix::all_finite() const {
  for (float v : values_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

EmbeddingFile::EmbeddingFile(std::uint32_t dim) : dim_(dim) {
  if (dim == 0) throw ContractError("embedding dim must be positive");
}

void EmbeddingFile::add(std::string id, EmbeddingMatrix matrix) {
  if (matrix.cols() != dim_) {
    throw ContractError("matrix for '" + id + "' has " + std::to_string(matrix.cols()) +
                        " columns, file dim is " + std::to_string(dim_));
  }
  if (index_.count(id)) throw IntegrityError("duplicate embedding id '" + id + "'");
  index_.emplace(id, entries_.size());
  entries_.emplace_back(std::move(id), std::move(matrix));
}

const EmbeddingMatrix* EmbeddingFile::find(const std::string& id) const {
  const auto it = index_.find(id);
  return it == index_.end() ? nullptr : &entries_[it->second].second;
}

void write_embeddings(std::ostream& out, const EmbeddingFile& file) {
  out.write(kEmbeddingMagic.data(), static_cast<std::streamsize>(kEmbeddingMagic.size()));
  detail::put_le<std::uint32_t>(out, file.dim());
  detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(file.size()));
  for (const auto& [id, m] : file.entries()) {
    if (id.size() > std::numeric_limits<std::uint16_t>::max()) {
      throw ContractError("embedding id longer than 65535 bytes");
    }
    if (!m.all_finite()) throw DataError("non-finite embedding value for '" + id + "'");
    detail::put_le<std::uint16_t>(out, static_cast<std::uint16_t>(id.size()));
    out.write(id.data(), static_cast<std::streamsize>(id.size()));
    detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(m.rows()));
    for (float v : m.values()) detail::put_f32(out, v);
  }
}

EmbeddingFile read_embeddings(std::istream& in) {
  detail::expect_magic(in, kEmbeddingMagic);
  const auto dim = detail::get_le<std::uint32_t>(in, "dim");
  if (dim == 0) throw CorruptionError("embedding header declares dim 0");
  const auto count = detail::get_le<std::uint32_t>(in, "entry count");
  EmbeddingFile file(dim);
  std::vector<unsigned char> buffer;
  for (std::uint32_t e = 0; e < count; ++e) {
    const auto id_len = detail::get_le<std::uint16_t>(in, "id length");
    std::string id(id_len, '\0');
    if (!in.read(id.data(), id_len)) {
      throw CorruptionError("unexpected end of file inside entry id");
    }
    const auto rows = detail::get_le<std::uint32_t>(in, "piece count");
    const std::size_t n = static_cast<std::size_t>(rows) * dim;
    buffer.resize(n * 4);
    if (!in.read(reinterpret_cast<char*>(buffer.data()),
                 static_cast<std::streamsize>(buffer.size()))) {
      throw CorruptionError("entry '" + id + "' holds fewer than " +
                            std::to_string(rows) + " rows of dim " + std::to_string(dim));
    }
    std::vector<float> values(n);
    for (std::size_t i = 0; i < n; ++i) {
      const unsigned char* b = buffer.data() + 4 * i;
      const std::uint32_t bits = static_cast<std::uint32_t>(b[0]) |
                                 static_cast<std::uint32_t>(b[1]) << 8 |
                                 static_cast<std::uint32_t>(b[2]) << 16 |
                                 static_cast<std::uint32_t>(b[3]) << 24;
      values[i] = std::bit_cast<float>(bits);
      if (!std::isfinite(values[i])) {
        throw CorruptionError("non-finite value in entry '" + id + "'");
      }
    }
    if (file.find(id)) throw IntegrityError("duplicate embedding id '" + id + "'");
    file.add(std::move(id), EmbeddingMatrix(rows, dim, std::move(values)));
  }
  if (!detail::at_eof(in)) {
    throw CorruptionError("trailing bytes after the declared " + std::to_string(count) +
                          " entries");
  }
  return file;
}

void write_embeddings_file(const std::string& path, const EmbeddingFile& file) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write embedding file '" + path + "'");
  write_embeddings(out, file);
  if (!out) throw Error("error while writing '" + path + "'");
}

EmbeddingFile read_embeddings_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open embedding file '" + path + "'");
  return read_embeddings(in);
}

EmbeddingMatrix synthetic_embed(const TokenizedSentence& ts, std::size_t dim,
                                std::uint64_t seed, double separability) {
  if (dim < 8) throw ContractError("synthetic embedding dim must be at least 8");
  if (!(separability >= 0.0 && separability <= 1.0)) {
    throw ContractError("separability must lie in [0, 1]");
  }
  const std::size_t block = dim / 8;
  const std::uint64_t basis = mix64(seed ^ 0x5be0cd19137e2179ULL);
  EmbeddingMatrix m(ts.size(), dim);
  for (std::size_t p = 0; p < ts.size(); ++p) {
    const std::uint64_t piece_hash = stable_hash(ts.pieces[p], basis);
    const std::size_t signal_begin = index_of(ts.piece_labels[p]) * block;
    auto row = m.row(p);
    for (std::size_t j = 0; j < dim; ++j) {
      const std::uint64_t h = mix64(piece_hash + j);
      const double u = static_cast<double>(h >> 11) * 0x1.0p-53;  // [0, 1)
      double v = (2.0 * u - 1.0) * kSyntheticNoise;
      if (j >= signal_begin && j < signal_begin + block) v += separability * kSyntheticSignal;
      row[j] = static_cast<float>(v);
    }
  }
  return m;
}

std::vector<JoinedSentence> join_embeddings(
    const std::vector<TokenizedSentence>& sentences, const EmbeddingFile& file) {
  std::vector<JoinedSentence> joined;
  joined.reserve(sentences.size());
  for (const auto& ts : sentences) {
    const EmbeddingMatrix* m = file.find(ts.sentence_id);
    if (!m) throw JoinError("no embeddings for sentence '" + ts.sentence_id + "'");
    if (m->rows() != ts.size()) {
      throw JoinError("sentence '" + ts.sentence_id + "' has " + std::to_string(ts.size()) +
                      " pieces but " + std::to_string(m->rows()) + " embedding rows");
    }
    joined.push_back({&ts, m});
  }
  return joined;
}

}  // namespace plantner
