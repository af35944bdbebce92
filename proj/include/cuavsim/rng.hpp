#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace cuavsim {

// SplitMix64 finalizer, used both for seed expansion and for deriving
// independent stream keys from (seed, replication, agent, purpose) paths.
inline std::uint64_t split_mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Stream derivation rule: key' = split_mix64(key ^ (GOLDEN + id)).
// Applying the rule along a path of ids gives a well-separated stream key
// for every (seed, replication, agent, purpose) combination.
inline std::uint64_t derive_stream_key(std::uint64_t key, std::uint64_t id) {
  return split_mix64(key ^ (0x9E3779B97F4A7C15ULL + id));
}

// Purpose tags for stream derivation. The full path of a stream is
// (seed) -> (replication) -> (purpose [, agent index]).
enum StreamPurpose : std::uint64_t {
  kStreamScenario = 1,  // per-replication channel params and gains
  kStreamEnv = 2,       // channel transitions and sensing draws
  kStreamAgent = 3,     // agent n uses id kStreamAgent + n
};

// xoshiro256++ with SplitMix64 seeding. All distributions are generated
// from explicit integer arithmetic so that output sequences depend only on
// the seed, never on a library implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : state_) {
      sm += 0x9E3779B97F4A7C15ULL;
      word = split_mix64(sm);
    }
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
  }

  // Rng for the stream identified by the id path below `seed`.
  static Rng derive(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
    std::uint64_t key = seed;
    for (std::uint64_t id : path) key = derive_stream_key(key, id);
    return Rng(key);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform in [0,1) with 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  bool bernoulli(double p) { return uniform01() < p; }

  // Unbiased integer in [0, n), n >= 1 (Lemire's multiply-shift rejection).
  std::uint64_t uniform_int(std::uint64_t n) {
    std::uint64_t x = next_u64();
    unsigned __int128 m = static_cast<unsigned __int128>(x) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (low < threshold) {
        x = next_u64();
        m = static_cast<unsigned __int128>(x) * n;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

 private:
  static std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

  std::uint64_t state_[4];
};

}  // namespace cuavsim
