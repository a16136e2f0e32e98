#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "hoplite/graph.hpp"

namespace hoplite {

// Hop-array markers returned by bfs_hops.
inline constexpr std::uint32_t kHopSelf = 0;
inline constexpr std::uint32_t kBeyondCap = std::numeric_limits<std::uint32_t>::max();

// Maps raw hop counts onto alpha merged category labels. Category c covers
// hops in (boundaries[c-1], boundaries[c]]; the last category covers every
// hop beyond the final boundary.
struct MergePolicy {
  std::vector<std::uint32_t> boundaries;  // strictly increasing, first >= 1

  std::uint32_t alpha() const { return static_cast<std::uint32_t>(boundaries.size()) + 1; }
  std::uint32_t cap() const { return boundaries.back(); }
  void validate() const;

  // Categories 0..alpha-2 split at consecutive hops 1..alpha-1, with one
  // catch-all tail: the scheme used for the class-count comparison table.
  static MergePolicy contiguous(std::uint32_t alpha);
  // Four categories with hops 3 and 4 merged: {1}, {2}, {3,4}, {5+}.
  static MergePolicy default_policy() { return MergePolicy{{1, 2, 4}}; }
};

// Category of a hop value under the policy. hop must be >= 1 or kBeyondCap;
// a node is never part of its own context, so hop == kHopSelf throws.
std::uint32_t category_of(const MergePolicy& policy, std::uint32_t hop);

// Per-node hop buckets up to a cap, in one flat arena:
// bucket(i, k) = sorted node ids at exactly hop k from i, k = 1..cap.
class ContextIndex {
public:
  ContextIndex() = default;

  std::uint32_t num_nodes() const { return num_nodes_; }
  std::uint32_t cap() const { return cap_; }

  std::span<const NodeId> bucket(NodeId i, std::uint32_t hop) const {
    const std::size_t slot = static_cast<std::size_t>(i) * cap_ + (hop - 1);
    return {members_.data() + bucket_offsets_[slot], members_.data() + bucket_offsets_[slot + 1]};
  }
  // Number of nodes within the cap of node i (excluding i itself).
  std::uint64_t within_cap_size(NodeId i) const {
    return bucket_offsets_[static_cast<std::size_t>(i + 1) * cap_] -
           bucket_offsets_[static_cast<std::size_t>(i) * cap_];
  }
  // True when 1 <= dist(i, j) <= cap. Binary search per hop bucket, so the
  // membership test costs O(cap * log deg) and no extra storage.
  bool within_cap(NodeId i, NodeId j) const;

  // Component ids let the sampler distinguish "far but reachable" from
  // "unreachable". They are recomputed from the graph, never serialized.
  const std::vector<std::uint32_t>& component_of() const { return comp_; }
  std::uint64_t component_size(NodeId i) const { return comp_sizes_[comp_[i]]; }

  // Little-endian binary cache: magic "S2CX", version, n, cap, then per node
  // per hop bucket a u32 length followed by sorted u32 ids. Bit-exact across
  // platforms and thread counts.
  void save(const std::string& path) const;
  static ContextIndex load(const std::string& path, const Graph& g);

  // Per-hop bucket totals, for the prepare-command histogram.
  std::vector<std::uint64_t> bucket_totals() const;

  friend ContextIndex build_context(const Graph& g, const MergePolicy& policy, int num_threads);

private:
  std::uint32_t num_nodes_ = 0;
  std::uint32_t cap_ = 0;
  std::vector<std::uint64_t> bucket_offsets_;  // size n*cap + 1
  std::vector<NodeId> members_;
  std::vector<std::uint32_t> comp_;
  std::vector<std::uint64_t> comp_sizes_;
};

// Shortest-path hops from source to every node, capped: hop[j] in 1..cap,
// kHopSelf for the source, kBeyondCap for hop > cap and for unreachable
// nodes (their distance is treated as infinite).
std::vector<std::uint32_t> bfs_hops(const Graph& g, NodeId source, std::uint32_t cap);

// Builds buckets for every node up to cap = policy's last boundary. Parallel
// over sources; the result is independent of the thread count.
// num_threads <= 0 uses the OpenMP default.
ContextIndex build_context(const Graph& g, const MergePolicy& policy, int num_threads = 0);

}  // namespace hoplite
