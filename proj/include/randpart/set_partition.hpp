#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace randpart {

/// A set partition of {0,...,n-1} in canonical form: labels[i] is the block
/// id of element i, block ids are assigned in first-occurrence order, so
/// labels[0] == 0 and labels[i] <= 1 + max(labels[0..i-1]). Two SetPartition
/// values represent the same partition iff their label arrays are equal.
///
/// Elements are 0-indexed; ground sets written {1..n} elsewhere map to
/// {0..n-1} here.
class SetPartition {
 public:
  /// The all-singletons partition (bottom of the refinement lattice).
  static SetPartition singletons(std::uint32_t n);
  /// The one-block partition (top of the refinement lattice).
  static SetPartition one_block(std::uint32_t n);

  /// Wraps a label array that is already canonical; throws
  /// std::invalid_argument if it is empty or violates canonical form.
  static SetPartition from_labels(std::vector<std::uint32_t> labels);

  /// Relabels an arbitrary block-id array into canonical form.
  static SetPartition canonicalized(std::span<const std::uint32_t> raw_labels);

  /// Parses the text form "0,0,1". Strict: the array must be canonical.
  static SetPartition from_string(const std::string& text);

  std::uint32_t size() const { return static_cast<std::uint32_t>(labels_.size()); }
  std::uint32_t num_blocks() const { return num_blocks_; }
  std::uint32_t label(std::uint32_t i) const { return labels_[i]; }
  const std::vector<std::uint32_t>& labels() const { return labels_; }

  bool same_block(std::uint32_t i, std::uint32_t j) const { return labels_[i] == labels_[j]; }
  bool is_singletons() const { return num_blocks_ == size(); }
  bool is_one_block() const { return num_blocks_ == 1; }

  /// Comma-separated label array, e.g. "0,0,1".
  std::string to_string() const;

  friend bool operator==(const SetPartition&, const SetPartition&) = default;

 private:
  SetPartition(std::vector<std::uint32_t> labels, std::uint32_t num_blocks)
      : labels_(std::move(labels)), num_blocks_(num_blocks) {}

  std::vector<std::uint32_t> labels_;
  std::uint32_t num_blocks_ = 0;
};

/// Block-size summary of a partition.
struct BlockStats {
  std::uint32_t num_blocks = 0;
  std::uint32_t largest_block = 0;                     // L
  std::uint32_t singletons = 0;                        // M
  std::map<std::uint32_t, std::uint32_t> size_histogram;  // size -> multiplicity
};

/// Partition of {0..n-1} into the non-empty preimages of f.
/// Throws std::invalid_argument if any f[i] >= f.size().
SetPartition partition_from_map(std::span<const std::uint32_t> f);

/// Greatest lower bound: blocks are the non-empty pairwise intersections.
SetPartition meet(const SetPartition& p, const SetPartition& q);

/// Least upper bound: finest partition coarser than both.
SetPartition join(const SetPartition& p, const SetPartition& q);

/// Join of the partitions induced by a sequence of maps, folded through one
/// disjoint-set forest: O(t*n*alpha(n)) time, O(n) memory.
SetPartition join_streaming(std::uint32_t n,
                            std::span<const std::vector<std::uint32_t>> maps);

/// True iff p refines q (every block of p lies inside one block of q).
bool refines(const SetPartition& p, const SetPartition& q);

BlockStats block_stats(const SetPartition& p);

/// Independent oracle for join_streaming: builds the multigraph with one edge
/// type per map (i ~ j iff the map sends them to the same value, as full
/// cliques per preimage) and returns its connected components via BFS.
SetPartition graph_components_oracle(std::uint32_t n,
                                     std::span<const std::vector<std::uint32_t>> maps);

/// Calls fn(labels) for every canonical label array of length n
/// (restricted growth strings), in lexicographic order.
template <typename Fn>
void for_each_partition(std::uint32_t n, Fn&& fn) {
  if (n == 0) return;
  std::vector<std::uint32_t> labels(n, 0);
  std::vector<std::uint32_t> prefix_max(n, 0);  // max label over labels[0..i]
  for (;;) {
    fn(static_cast<const std::vector<std::uint32_t>&>(labels));
    // rightmost position whose label can still grow (labels[i] <= prefix_max[i-1])
    std::uint32_t i = n - 1;
    while (i >= 1 && labels[i] > prefix_max[i - 1]) --i;
    if (i < 1) return;
    ++labels[i];
    prefix_max[i] = std::max(prefix_max[i - 1], labels[i]);
    for (std::uint32_t j = i + 1; j < n; ++j) {
      labels[j] = 0;
      prefix_max[j] = prefix_max[j - 1];
    }
  }
}

}  // namespace randpart
