#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace confclust {

/// Reproducible random source.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. The engine seed is SplitMix64(seed) combined with a stream id, so
/// independent sub-streams can be derived from one user seed. The standard
/// library distributions are implementation-defined, so the transforms below
/// (uniform reals, normals, bounded integers, shuffles) are written out here to
/// keep results identical across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal (Marsaglia polar method).
  double normal();

  /// Uniform on {0, ..., n-1}; n > 0.
  std::size_t index(std::size_t n);

  /// Fisher-Yates shuffle.
  template <class T>
  void shuffle(std::span<T> v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = index(i);
      std::swap(v[i - 1], v[j]);
    }
  }

  /// Draw an index with probability proportional to weights[i] (all >= 0,
  /// positive sum).
  std::size_t categorical(std::span<const double> weights);

 private:
  std::mt19937_64 engine_;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Derive a child seed for a named sub-task; used to give each restart, trial or
/// bootstrap replicate its own deterministic stream.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag);

}  // namespace confclust
