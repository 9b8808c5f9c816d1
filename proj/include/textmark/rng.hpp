#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace textmark {

// SplitMix64: used to expand seeds and derive child streams.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}
  uint64_t next();

 private:
  uint64_t state_;
};

// xoshiro256** seeded from SplitMix64. Bounded draws use Lemire's multiply-shift
// rejection method, so results do not depend on any standard library distribution.
class Rng {
 public:
  explicit Rng(uint64_t seed);

  uint64_t next();
  // Uniform in [0, bound), bound > 0.
  uint64_t below(uint64_t bound);
  // Uniform in [0, 1) with 53 random bits.
  double unit();
  // Independent child stream keyed by `stream`; does not advance this generator.
  Rng split(uint64_t stream) const;

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  Rng() = default;
  uint64_t s_[4] = {0, 0, 0, 0};
};

}  // namespace textmark
