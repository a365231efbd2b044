#include "randpart/set_partition.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include "randpart/union_find.hpp"

namespace randpart {

namespace {

constexpr std::uint32_t kUnset = std::numeric_limits<std::uint32_t>::max();

void require_same_size(const SetPartition& p, const SetPartition& q) {
  if (p.size() != q.size())
    throw std::invalid_argument("partition ground-set sizes differ: " +
                                std::to_string(p.size()) + " vs " + std::to_string(q.size()));
}

void require_valid_map(std::uint32_t n, std::span<const std::uint32_t> f) {
  if (f.size() != n) throw std::invalid_argument("map length does not match ground-set size");
  for (std::uint32_t v : f)
    if (v >= n) throw std::invalid_argument("map value " + std::to_string(v) + " out of range [0, " +
                                            std::to_string(n) + ")");
}

// Canonical labels from the roots of a populated disjoint-set forest.
SetPartition partition_from_forest(UnionFind& uf) {
  const std::uint32_t n = uf.element_count();
  std::vector<std::uint32_t> canon(n, kUnset);
  std::vector<std::uint32_t> labels(n);
  std::uint32_t next = 0;
  for (std::uint32_t i = 0; i < n; ++i) {
    std::uint32_t r = uf.find(i);
    if (canon[r] == kUnset) canon[r] = next++;
    labels[i] = canon[r];
  }
  return SetPartition::from_labels(std::move(labels));
}

}  // namespace

SetPartition SetPartition::singletons(std::uint32_t n) {
  if (n == 0) throw std::invalid_argument("partition of the empty set");
  std::vector<std::uint32_t> labels(n);
  for (std::uint32_t i = 0; i < n; ++i) labels[i] = i;
  return SetPartition(std::move(labels), n);
}

SetPartition SetPartition::one_block(std::uint32_t n) {
  if (n == 0) throw std::invalid_argument("partition of the empty set");
  return SetPartition(std::vector<std::uint32_t>(n, 0), 1);
}

SetPartition SetPartition::from_labels(std::vector<std::uint32_t> labels) {
  if (labels.empty()) throw std::invalid_argument("partition of the empty set");
  std::uint32_t max_seen = 0;
  if (labels[0] != 0) throw std::invalid_argument("label array not canonical: labels[0] != 0");
  for (std::size_t i = 1; i < labels.size(); ++i) {
    if (labels[i] > max_seen + 1)
      throw std::invalid_argument("label array not canonical at position " + std::to_string(i));
    max_seen = std::max(max_seen, labels[i]);
  }
  return SetPartition(std::move(labels), max_seen + 1);
}

SetPartition SetPartition::canonicalized(std::span<const std::uint32_t> raw_labels) {
  if (raw_labels.empty()) throw std::invalid_argument("partition of the empty set");
  std::unordered_map<std::uint32_t, std::uint32_t> remap;
  remap.reserve(raw_labels.size());
  std::vector<std::uint32_t> labels(raw_labels.size());
  std::uint32_t next = 0;
  for (std::size_t i = 0; i < raw_labels.size(); ++i) {
    auto [it, inserted] = remap.try_emplace(raw_labels[i], next);
    if (inserted) ++next;
    labels[i] = it->second;
  }
  return SetPartition(std::move(labels), next);
}

SetPartition SetPartition::from_string(const std::string& text) {
  std::vector<std::uint32_t> labels;
  const char* p = text.data();
  const char* end = p + text.size();
  while (p < end) {
    std::uint32_t v = 0;
    auto [next, ec] = std::from_chars(p, end, v);
    if (ec != std::errc() || next == p)
      throw std::invalid_argument("bad partition text: expected integer in \"" + text + "\"");
    labels.push_back(v);
    p = next;
    if (p < end) {
      if (*p != ',') throw std::invalid_argument("bad partition text: expected ',' in \"" + text + "\"");
      ++p;
      if (p == end) throw std::invalid_argument("bad partition text: trailing ','");
    }
  }
  return from_labels(std::move(labels));
}

std::string SetPartition::to_string() const {
  std::string out;
  out.reserve(labels_.size() * 2);
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (i) out.push_back(',');
    out += std::to_string(labels_[i]);
  }
  return out;
}

SetPartition partition_from_map(std::span<const std::uint32_t> f) {
  const auto n = static_cast<std::uint32_t>(f.size());
  require_valid_map(n, f);
  std::vector<std::uint32_t> value_label(n, kUnset);
  std::vector<std::uint32_t> labels(n);
  std::uint32_t next = 0;
  for (std::uint32_t i = 0; i < n; ++i) {
    std::uint32_t& slot = value_label[f[i]];
    if (slot == kUnset) slot = next++;
    labels[i] = slot;
  }
  return SetPartition::from_labels(std::move(labels));
}

SetPartition meet(const SetPartition& p, const SetPartition& q) {
  require_same_size(p, q);
  const std::uint32_t n = p.size();
  std::unordered_map<std::uint64_t, std::uint32_t> pair_label;
  pair_label.reserve(n);
  std::vector<std::uint32_t> labels(n);
  std::uint32_t next = 0;
  for (std::uint32_t i = 0; i < n; ++i) {
    const std::uint64_t key =
        static_cast<std::uint64_t>(p.label(i)) * q.num_blocks() + q.label(i);
    auto [it, inserted] = pair_label.try_emplace(key, next);
    if (inserted) ++next;
    labels[i] = it->second;
  }
  return SetPartition::from_labels(std::move(labels));
}

SetPartition join(const SetPartition& p, const SetPartition& q) {
  require_same_size(p, q);
  const std::uint32_t n = p.size();
  UnionFind uf(n);
  std::vector<std::uint32_t> first(std::max(p.num_blocks(), q.num_blocks()), kUnset);
  for (std::uint32_t i = 0; i < n; ++i) {
    std::uint32_t& slot = first[p.label(i)];
    if (slot == kUnset) slot = i;
    else uf.unite(i, slot);
  }
  std::fill(first.begin(), first.end(), kUnset);
  for (std::uint32_t i = 0; i < n; ++i) {
    std::uint32_t& slot = first[q.label(i)];
    if (slot == kUnset) slot = i;
    else uf.unite(i, slot);
  }
  return partition_from_forest(uf);
}

SetPartition join_streaming(std::uint32_t n,
                            std::span<const std::vector<std::uint32_t>> maps) {
  if (n == 0) throw std::invalid_argument("partition of the empty set");
  UnionFind uf(n);
  std::vector<std::uint32_t> first_elem(n);
  std::vector<std::uint32_t> stamp(n, 0);
  std::uint32_t epoch = 0;
  for (const auto& f : maps) {
    require_valid_map(n, f);
    ++epoch;
    for (std::uint32_t i = 0; i < n; ++i) {
      const std::uint32_t v = f[i];
      if (stamp[v] == epoch) {
        uf.unite(i, first_elem[v]);
      } else {
        stamp[v] = epoch;
        first_elem[v] = i;
      }
    }
  }
  return partition_from_forest(uf);
}

bool refines(const SetPartition& p, const SetPartition& q) {
  require_same_size(p, q);
  // p <= q iff the map (p-block -> q-block) induced by elements is well defined.
  std::vector<std::uint32_t> image(p.num_blocks(), kUnset);
  for (std::uint32_t i = 0; i < p.size(); ++i) {
    std::uint32_t& img = image[p.label(i)];
    if (img == kUnset) img = q.label(i);
    else if (img != q.label(i)) return false;
  }
  return true;
}

BlockStats block_stats(const SetPartition& p) {
  std::vector<std::uint32_t> sizes(p.num_blocks(), 0);
  for (std::uint32_t i = 0; i < p.size(); ++i) ++sizes[p.label(i)];
  BlockStats stats;
  stats.num_blocks = p.num_blocks();
  for (std::uint32_t s : sizes) {
    stats.largest_block = std::max(stats.largest_block, s);
    if (s == 1) ++stats.singletons;
    ++stats.size_histogram[s];
  }
  return stats;
}

SetPartition graph_components_oracle(std::uint32_t n,
                                     std::span<const std::vector<std::uint32_t>> maps) {
  if (n == 0) throw std::invalid_argument("partition of the empty set");
  // Full cliques per preimage: edge of type s between i and j iff maps[s][i] == maps[s][j].
  std::vector<std::vector<std::uint32_t>> adj(n);
  std::vector<std::vector<std::uint32_t>> buckets(n);
  for (const auto& f : maps) {
    require_valid_map(n, f);
    for (auto& b : buckets) b.clear();
    for (std::uint32_t i = 0; i < n; ++i) buckets[f[i]].push_back(i);
    for (const auto& b : buckets)
      for (std::size_t x = 0; x < b.size(); ++x)
        for (std::size_t y = x + 1; y < b.size(); ++y) {
          adj[b[x]].push_back(b[y]);
          adj[b[y]].push_back(b[x]);
        }
  }
  std::vector<std::uint32_t> labels(n, kUnset);
  std::vector<std::uint32_t> queue;
  std::uint32_t next = 0;
  for (std::uint32_t start = 0; start < n; ++start) {
    if (labels[start] != kUnset) continue;
    const std::uint32_t comp = next++;
    labels[start] = comp;
    queue.assign(1, start);
    while (!queue.empty()) {
      const std::uint32_t u = queue.back();
      queue.pop_back();
      for (std::uint32_t v : adj[u])
        if (labels[v] == kUnset) {
          labels[v] = comp;
          queue.push_back(v);
        }
    }
  }
  return SetPartition::from_labels(std::move(labels));
}

}  // namespace randpart
