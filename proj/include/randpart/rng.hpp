#pragma once

#include <cstdint>

namespace randpart {

// splitmix64 finalizer (Steele, Lea, Flood 2014). Used only for state expansion.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// xoshiro256** (Blackman & Vigna 2018): 256-bit state, fixed across platforms.
class Xoshiro256StarStar {
 public:
  explicit Xoshiro256StarStar(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : s_) word = splitmix64(sm);
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Unbiased uniform draw from [0, bound) by multiply-shift rejection
  // (Lemire 2019): accept the high 64 bits of bound * u64 unless the low
  // 64 bits fall in the biased zone [0, 2^64 mod bound).
  std::uint64_t below(std::uint64_t bound) {
    unsigned __int128 product = static_cast<unsigned __int128>(next()) * bound;
    auto low = static_cast<std::uint64_t>(product);
    if (low < bound) {
      const std::uint64_t threshold = -bound % bound;  // 2^64 mod bound
      while (low < threshold) {
        product = static_cast<unsigned __int128>(next()) * bound;
        low = static_cast<std::uint64_t>(product);
      }
    }
    return static_cast<std::uint64_t>(product >> 64);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::uint64_t s_[4];
};

struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_index = 0;
};

// Pure function of (master_seed, stream_index). The generator seed is
// mix(mix(master) ^ stream): for a fixed master the stream map is a bijection
// (no two stream indices ever share a generator seed), and distinct masters
// hash to unrelated stream families instead of permutations of one another.
inline Xoshiro256StarStar derive_trial_rng(const SeedSpec& seed) {
  std::uint64_t walk = seed.master_seed;
  const std::uint64_t master_hash = splitmix64(walk);
  walk = master_hash ^ seed.stream_index;
  return Xoshiro256StarStar(splitmix64(walk));
}

}  // namespace randpart
