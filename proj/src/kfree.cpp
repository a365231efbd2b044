#include "randpart/kfree.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace randpart {

namespace {

// words[w] bit b corresponds to sum 64*w + b.
void shift_or_inplace(std::vector<std::uint64_t>& words, std::uint32_t shift,
                      std::vector<std::uint64_t>& scratch) {
  const std::uint32_t word_shift = shift / 64;
  const std::uint32_t bit_shift = shift % 64;
  const std::size_t nw = words.size();
  scratch.assign(nw, 0);
  for (std::size_t w = 0; w + word_shift < nw; ++w) {
    const std::uint64_t v = words[w];
    scratch[w + word_shift] |= bit_shift ? (v << bit_shift) : v;
    if (bit_shift && w + word_shift + 1 < nw) scratch[w + word_shift + 1] |= v >> (64 - bit_shift);
  }
  for (std::size_t w = 0; w < nw; ++w) words[w] |= scratch[w];
}

}  // namespace

std::vector<std::uint64_t> kfree_spectrum(const SetPartition& p, std::uint32_t max_n) {
  const std::uint32_t n = p.size();
  if (n > max_n)
    throw std::length_error("kfree_spectrum: n = " + std::to_string(n) + " exceeds limit " +
                            std::to_string(max_n));
  std::map<std::uint32_t, std::uint32_t> multiplicity;  // block size -> count
  for (const auto& [size, count] : block_stats(p).size_histogram) multiplicity[size] = count;

  std::vector<std::uint64_t> words(n / 64 + 1, 0);
  words[0] = 1;  // empty collection
  std::vector<std::uint64_t> scratch;
  // Bounded-count subset sum via binary decomposition of each multiplicity:
  // count copies of `size` become items size*1, size*2, size*4, ... covering
  // every achievable total with O(log count) shift-or passes.
  for (const auto& [size, count] : multiplicity) {
    std::uint32_t remaining = count;
    std::uint32_t chunk = 1;
    while (remaining > 0) {
      const std::uint32_t take = std::min(chunk, remaining);
      shift_or_inplace(words, size * take, scratch);
      remaining -= take;
      chunk <<= 1;
    }
  }
  return words;
}

bool spectrum_bit(const std::vector<std::uint64_t>& spectrum, std::uint32_t k) {
  const std::uint32_t w = k / 64;
  if (w >= spectrum.size()) return false;
  return (spectrum[w] >> (k % 64)) & 1u;
}

bool is_k_free(const SetPartition& p, std::uint32_t k, std::uint32_t max_n) {
  if (k == 0 || k >= p.size())
    throw std::invalid_argument("is_k_free: k must satisfy 0 < k < n");
  return !spectrum_bit(kfree_spectrum(p, max_n), k);
}

bool KfreePropertyReport::all_applicable_hold() const {
  return std::all_of(entries.begin(), entries.end(),
                     [](const Entry& e) { return !e.applicable || e.holds; });
}

KfreePropertyReport verify_kfree_properties(const SetPartition& p, std::uint32_t a,
                                            std::uint32_t b, std::uint32_t max_n) {
  const std::uint32_t n = p.size();
  if (!(1 <= a && a < b && b < n))
    throw std::invalid_argument("verify_kfree_properties: need 1 <= a < b < n");
  const auto spectrum = kfree_spectrum(p, max_n);
  bool interval_free = true;
  for (std::uint32_t k = a; k <= b; ++k)
    if (spectrum_bit(spectrum, k)) {
      interval_free = false;
      break;
    }
  const bool b_free = !spectrum_bit(spectrum, b);

  const BlockStats stats = block_stats(p);
  const std::uint32_t h = stats.singletons;
  std::uint32_t tail_mass = 0;  // elements in blocks of size >= a
  for (const auto& [size, count] : stats.size_histogram)
    if (size >= a) tail_mass += size * count;

  KfreePropertyReport report;
  report.entries.push_back({"min-gap-block", interval_free, stats.largest_block >= b - a});
  report.entries.push_back({"double-free-big", interval_free && 2 * a <= b, stats.largest_block >= b});
  report.entries.push_back({"singleton-cap", h >= 1 && b_free && b > h, stats.largest_block >= h});
  report.entries.push_back({"tail-mass", interval_free && 2 * a <= b, tail_mass >= n - a});
  return report;
}

}  // namespace randpart
