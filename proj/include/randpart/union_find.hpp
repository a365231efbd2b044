#pragma once

#include <cstdint>
#include <vector>

namespace randpart {

// Disjoint-set forest with path compression and union by size.
// Reusable: reset(n) re-initializes without reallocating when capacity allows.
class UnionFind {
 public:
  UnionFind() = default;
  explicit UnionFind(std::uint32_t n) { reset(n); }

  void reset(std::uint32_t n) {
    parent_.resize(n);
    size_.assign(n, 1);
    for (std::uint32_t i = 0; i < n; ++i) parent_[i] = i;
    count_ = n;
  }

  std::uint32_t find(std::uint32_t x) {
    std::uint32_t root = x;
    while (parent_[root] != root) root = parent_[root];
    while (parent_[x] != root) {
      std::uint32_t next = parent_[x];
      parent_[x] = root;
      x = next;
    }
    return root;
  }

  // Merges the sets containing a and b; returns false if already joined.
  bool unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    --count_;
    return true;
  }

  bool connected(std::uint32_t a, std::uint32_t b) { return find(a) == find(b); }

  // Size of the set containing x.
  std::uint32_t set_size(std::uint32_t x) { return size_[find(x)]; }

  // Number of disjoint sets.
  std::uint32_t count() const { return count_; }

  std::uint32_t element_count() const { return static_cast<std::uint32_t>(parent_.size()); }

  bool is_root(std::uint32_t x) const { return parent_[x] == x; }

  // Valid only when x is a root.
  std::uint32_t root_size(std::uint32_t x) const { return size_[x]; }

 private:
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint32_t> size_;
  std::uint32_t count_ = 0;
};

}  // namespace randpart
