#pragma once

#include <cstdint>
#include <random>

namespace fuzztree {

/// mt19937_64 with hand-rolled value mappings. The standard distributions are
/// implementation-defined, so generated benchmarks would differ across
/// standard libraries; these mappings keep outputs byte-reproducible per seed
/// on any conforming platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t bits() { return eng_(); }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(bits() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  /// Unbiased uniform integer in [0, n), n >= 1 (rejection sampling).
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t threshold = -n % n;  // = 2^64 mod n
    for (;;) {
      const std::uint64_t x = bits();
      if (x >= threshold) return x % n;
    }
  }

  std::size_t index(std::size_t n) { return static_cast<std::size_t>(below(n)); }

  bool bernoulli(double p) { return uniform() < p; }

  /// Derives an independent child generator; deterministic given this one.
  std::uint64_t fork_seed() { return bits() ^ 0x9e3779b97f4a7c15ull; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace fuzztree
