#pragma once

#include <cstdint>
#include <random>

namespace ahm {

// Deterministic sampler used by the axiom checkers. mt19937_64 with a fixed
// 53-bit uniform keeps runs bit-for-bit reproducible across platforms, which
// matters because witnesses are reported by sample index.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform in {0, ..., n-1}.
  std::uint64_t below(std::uint64_t n) {
    // Modulo bias is irrelevant at these ranges (n is tiny vs 2^64).
    return gen_() % n;
  }

  std::uint64_t raw() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace ahm
