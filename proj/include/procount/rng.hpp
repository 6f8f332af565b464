#pragma once

#include <cstdint>
#include <random>

namespace procount {

// Seeded generator with stable helpers; every sampling loop in the
// library and the verification suites goes through this so that a fixed
// seed reproduces reports byte for byte.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }

  // uniform in [0, n); n > 0
  std::uint64_t below(std::uint64_t n) { return gen_() % n; }

  // uniform in [lo, hi] inclusive
  std::int64_t range(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  bool coin() { return (gen_() & 1u) != 0; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace procount
