#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "randpart/set_partition.hpp"

namespace randpart {

// Bitset of achievable union sizes: bit k set iff some sub-collection of blocks
// has total size exactly k. Bit 0 (empty collection) is always set.
// Throws std::length_error when p.size() exceeds max_n (DP is Theta(n^2 / 64)
// per distinct multiplicity class; the guard keeps accidental huge inputs out).
std::vector<std::uint64_t> kfree_spectrum(const SetPartition& p, std::uint32_t max_n = 65536);

bool spectrum_bit(const std::vector<std::uint64_t>& spectrum, std::uint32_t k);

// True iff no sub-collection of blocks has union of size exactly k.
// Requires 0 < k < p.size(); k = 0 and k = n are achievable for every partition.
bool is_k_free(const SetPartition& p, std::uint32_t k, std::uint32_t max_n = 65536);

struct KfreePropertyReport {
  struct Entry {
    std::string name;
    bool applicable = false;  // false marks "hypothesis not met"
    bool holds = false;       // meaningful only when applicable
  };
  std::vector<Entry> entries;
  bool all_applicable_hold() const;
};

// Structural consequences of interval freeness, for 1 <= a < b < n.
// Writing F = "p is k-free for every k in [a, b]" and h = #singletons:
//   min-gap-block   : F                        => some block has size >= b - a
//   double-free-big : F and 2a <= b            => some block has size >= b
//   singleton-cap   : h >= 1, b-free, b > h    => some block has size >= h
//   tail-mass       : F and 2a <= b            => blocks of size >= a
//                                                 cover >= n - a elements
// Entries come back in that order; a lemma whose hypothesis fails is marked
// not applicable rather than failed. Throws unless 1 <= a < b < p.size().
KfreePropertyReport verify_kfree_properties(const SetPartition& p, std::uint32_t a,
                                            std::uint32_t b, std::uint32_t max_n = 65536);

}  // namespace randpart
