#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>
#include <vector>

namespace plantner {

// 64-bit FNV-1a followed by a splitmix64 finalizer. Stable across platforms
// and runs; used for seed derivation and synthetic-embedding noise.
std::uint64_t stable_hash(std::string_view bytes,
                          std::uint64_t basis = 0xcbf29ce484222325ULL);

std::uint64_t mix64(std::uint64_t x);

// Folds a sequence of string/integer components into one child seed.
class SeedBuilder {
 public:
  explicit SeedBuilder(std::uint64_t master) : state_(mix64(master)) {}
  SeedBuilder& add(std::string_view component);
  SeedBuilder& add(std::uint64_t component);
  std::uint64_t seed() const { return state_; }

 private:
  std::uint64_t state_;
};

// Deterministic generator. The engine (mt19937_64) is fully specified by the
// standard; the integer/real mappings are written out here because the
// standard distributions are not portable between library vendors.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound);
  // Uniform real in [0, 1) with 53 random bits.
  double unit();
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  // Uniformly shuffled 0..n-1 (Fisher-Yates).
  std::vector<std::size_t> permutation(std::size_t n);
  // k distinct indices of 0..n-1 drawn without replacement, in draw order.
  std::vector<std::size_t> sample(std::size_t n, std::size_t k);

 private:
  std::mt19937_64 engine_;
};

}  // namespace plantner
