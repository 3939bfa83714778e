#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace ciota {

/// Deterministic random source used everywhere randomness is needed.
///
/// std::mt19937_64 output is fixed by the standard, but the standard
/// distributions are not, so bounded draws are implemented here by hand.
/// Identical seeds therefore produce identical streams on every platform.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix(seed)) {}

  /// Derive an independent stream, e.g. one per simulation trial.
  static Rng derive(std::uint64_t seed, std::uint64_t stream) {
    return Rng(splitmix(seed ^ (0x9e3779b97f4a7c15ULL + stream)));
  }

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, bound). bound must be nonzero.
  std::uint64_t below(std::uint64_t bound) {
    // rejection sampling keeps the draw exactly uniform
    const std::uint64_t limit = bound * (UINT64_MAX / bound);
    std::uint64_t v = engine_();
    while (v >= limit) v = engine_();
    return v % bound;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  /// Uniform integer in [lo, hi] inclusive.
  std::uint64_t range(std::uint64_t lo, std::uint64_t hi) {
    return lo + below(hi - lo + 1);
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[below(i)]);
    }
  }

  /// First k elements of a seeded partial Fisher-Yates over v.
  template <typename T>
  std::vector<T> sample(const std::vector<T>& v, std::size_t k) {
    std::vector<T> pool = v;
    if (k >= pool.size()) return pool;
    for (std::size_t i = 0; i < k; ++i) {
      std::swap(pool[i], pool[i + below(pool.size() - i)]);
    }
    pool.resize(k);
    return pool;
  }

private:
  static std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  std::mt19937_64 engine_;
};

} // namespace ciota
