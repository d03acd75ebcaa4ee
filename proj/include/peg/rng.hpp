#pragma once

#include <cstdint>
#include <random>

#include "peg/common.hpp"
#include "peg/core.hpp"

namespace peg {

// Stream derivation rule: every random quantity in an experiment is drawn
// from a child stream derived as
//
//   child_seed = derive_seed(parent_seed, tag, index)
//
// where `tag` names the purpose (StreamTag) and `index` is the replication,
// agent, or iteration number. Children depend only on the parent's seed,
// never on how far the parent has been consumed, so results are independent
// of scheduling. All sampling converts raw mt19937_64 output directly
// instead of going through std::*_distribution (whose output sequences are
// implementation-defined), keeping runs bit-identical across platforms.

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

enum class StreamTag : std::uint64_t {
  Replication = 1,
  Batch = 2,
  Strategy = 3,
  Split = 4,
  Verify = 5,
  Acceptance = 6,
  Vote = 7,
};

inline std::uint64_t derive_seed(std::uint64_t parent, StreamTag tag,
                                 std::uint64_t index = 0) {
  std::uint64_t s = splitmix64(parent ^ (0x9E3779B97F4A7C15ULL *
                                         static_cast<std::uint64_t>(tag)));
  return splitmix64(s ^ (0xD1B54A32D192ED03ULL * (index + 1)));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return uniform01() < p; }

  Label bernoulli_label(double p_one) { return bernoulli(p_one) ? 1 : 0; }

  // Uniform integer in [0, n). Rejection sampling, no modulo bias.
  std::uint64_t below(std::uint64_t n) {
    require(n > 0, ErrorCode::IndexOutOfRange, "below(0)");
    const std::uint64_t threshold = (~std::uint64_t{0}) - (~std::uint64_t{0}) % n;
    std::uint64_t x = next_u64();
    while (x >= threshold) x = next_u64();
    return x % n;
  }

  // Index drawn from a probability vector by CDF walk.
  Eigen::Index categorical(const ProbVector& p) {
    const double u = uniform01();
    double cum = 0.0;
    for (Eigen::Index i = 0; i + 1 < p.size(); ++i) {
      cum += p[i];
      if (u < cum) return i;
    }
    return p.size() - 1;
  }

  Label sample_label(const ProbVector& p) {
    return static_cast<Label>(categorical(p));
  }

  Rng child(StreamTag tag, std::uint64_t index = 0) const {
    return Rng(derive_seed(seed_, tag, index));
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace peg
