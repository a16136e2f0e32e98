#include "hoplite/context.hpp"

#include <omp.h>

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "hoplite/binio.hpp"

namespace hoplite {

void MergePolicy::validate() const {
  if (boundaries.empty()) throw InvalidArgument("merge policy: needs at least one boundary");
  if (boundaries.front() < 1) throw InvalidArgument("merge policy: first boundary must be >= 1");
  for (std::size_t i = 1; i < boundaries.size(); ++i)
    if (boundaries[i] <= boundaries[i - 1])
      throw InvalidArgument("merge policy: boundaries must be strictly increasing");
}

MergePolicy MergePolicy::contiguous(std::uint32_t alpha) {
  if (alpha < 2) throw InvalidArgument("merge policy: alpha must be >= 2");
  MergePolicy p;
  p.boundaries.resize(alpha - 1);
  for (std::uint32_t i = 0; i < alpha - 1; ++i) p.boundaries[i] = i + 1;
  return p;
}

std::uint32_t category_of(const MergePolicy& policy, std::uint32_t hop) {
  if (hop == kHopSelf) throw InvalidArgument("category_of: a node is not in its own context");
  for (std::uint32_t c = 0; c < policy.boundaries.size(); ++c)
    if (hop <= policy.boundaries[c]) return c;
  return static_cast<std::uint32_t>(policy.boundaries.size());
}

bool ContextIndex::within_cap(NodeId i, NodeId j) const {
  for (std::uint32_t k = 1; k <= cap_; ++k) {
    auto b = bucket(i, k);
    if (std::binary_search(b.begin(), b.end(), j)) return true;
  }
  return false;
}

std::vector<std::uint32_t> bfs_hops(const Graph& g, NodeId source, std::uint32_t cap) {
  if (source >= g.num_nodes) throw InvalidArgument("bfs_hops: source out of range");
  if (cap < 1) throw InvalidArgument("bfs_hops: cap must be >= 1");
  std::vector<std::uint32_t> hop(g.num_nodes, kBeyondCap);
  hop[source] = kHopSelf;
  std::vector<NodeId> frontier{source}, next;
  for (std::uint32_t depth = 1; depth <= cap && !frontier.empty(); ++depth) {
    next.clear();
    for (NodeId u : frontier) {
      for (NodeId v : g.neighbors_of(u)) {
        if (hop[v] == kBeyondCap && v != source) {
          hop[v] = depth;
          next.push_back(v);
        }
      }
    }
    frontier.swap(next);
  }
  return hop;
}

ContextIndex build_context(const Graph& g, const MergePolicy& policy, int num_threads) {
  policy.validate();
  const std::uint32_t cap = policy.cap();
  const std::uint32_t n = g.num_nodes;

  ContextIndex idx;
  idx.num_nodes_ = n;
  idx.cap_ = cap;

  // One writer per source node; bucket contents come out identical no matter
  // how the sources are distributed over threads.
  std::vector<std::vector<NodeId>> per_node(static_cast<std::size_t>(n) * cap);
#pragma omp parallel num_threads(num_threads > 0 ? num_threads : omp_get_max_threads())
  {
    std::vector<std::uint32_t> hop(n);
    std::vector<NodeId> frontier, next;
#pragma omp for schedule(dynamic, 64)
    for (std::int64_t s = 0; s < static_cast<std::int64_t>(n); ++s) {
      std::fill(hop.begin(), hop.end(), kBeyondCap);
      hop[s] = kHopSelf;
      frontier.assign(1, static_cast<NodeId>(s));
      for (std::uint32_t depth = 1; depth <= cap && !frontier.empty(); ++depth) {
        next.clear();
        auto& bucket = per_node[static_cast<std::size_t>(s) * cap + (depth - 1)];
        for (NodeId u : frontier) {
          for (NodeId v : g.neighbors_of(u)) {
            if (hop[v] == kBeyondCap && v != static_cast<NodeId>(s)) {
              hop[v] = depth;
              next.push_back(v);
            }
          }
        }
        bucket = next;
        std::sort(bucket.begin(), bucket.end());
        frontier.swap(next);
      }
    }
  }

  idx.bucket_offsets_.resize(static_cast<std::size_t>(n) * cap + 1);
  idx.bucket_offsets_[0] = 0;
  for (std::size_t slot = 0; slot < per_node.size(); ++slot)
    idx.bucket_offsets_[slot + 1] = idx.bucket_offsets_[slot] + per_node[slot].size();
  idx.members_.resize(idx.bucket_offsets_.back());
  for (std::size_t slot = 0; slot < per_node.size(); ++slot)
    std::copy(per_node[slot].begin(), per_node[slot].end(),
              idx.members_.begin() + static_cast<std::ptrdiff_t>(idx.bucket_offsets_[slot]));

  auto comps = g.components();
  idx.comp_ = std::move(comps.comp);
  idx.comp_sizes_ = std::move(comps.sizes);
  return idx;
}

namespace {
constexpr char kMagic[4] = {'S', '2', 'C', 'X'};
constexpr std::uint32_t kVersion = 1;
}  // namespace

void ContextIndex::save(const std::string& path) const {
  BinWriter w(path);
  w.raw(kMagic, 4);
  w.u32(kVersion);
  w.u32(num_nodes_);
  w.u32(cap_);
  for (std::size_t slot = 0; slot < static_cast<std::size_t>(num_nodes_) * cap_; ++slot) {
    const std::uint64_t beg = bucket_offsets_[slot], end = bucket_offsets_[slot + 1];
    w.u32(static_cast<std::uint32_t>(end - beg));
    w.u32_array(members_.data() + beg, end - beg);
  }
  w.finish();
}

ContextIndex ContextIndex::load(const std::string& path, const Graph& g) {
  BinReader r(path);
  char magic[4];
  r.raw(magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0)
    throw FormatError(path + ": bad magic, not a context cache");
  const std::uint32_t version = r.u32();
  if (version != kVersion)
    throw FormatError(path + ": unsupported cache version " + std::to_string(version));
  ContextIndex idx;
  idx.num_nodes_ = r.u32();
  idx.cap_ = r.u32();
  if (idx.num_nodes_ != g.num_nodes)
    throw FormatError(path + ": cache built for " + std::to_string(idx.num_nodes_) +
                      " nodes but graph has " + std::to_string(g.num_nodes));
  if (idx.cap_ < 1) throw FormatError(path + ": cap must be >= 1");
  const std::size_t slots = static_cast<std::size_t>(idx.num_nodes_) * idx.cap_;
  idx.bucket_offsets_.resize(slots + 1);
  idx.bucket_offsets_[0] = 0;
  std::vector<std::uint32_t> lens(slots);
  for (std::size_t slot = 0; slot < slots; ++slot) {
    lens[slot] = r.u32();
    idx.bucket_offsets_[slot + 1] = idx.bucket_offsets_[slot] + lens[slot];
    r.skip(static_cast<std::uint64_t>(lens[slot]) * 4);
  }
  r.seek(12 + 4);  // rewind past header
  idx.members_.resize(idx.bucket_offsets_.back());
  for (std::size_t slot = 0; slot < slots; ++slot) {
    r.u32();  // length, already known
    r.u32_array(idx.members_.data() + idx.bucket_offsets_[slot], lens[slot]);
  }
  r.expect_eof();
  for (NodeId id : idx.members_)
    if (id >= idx.num_nodes_) throw FormatError(path + ": member id out of range");

  auto comps = g.components();
  idx.comp_ = std::move(comps.comp);
  idx.comp_sizes_ = std::move(comps.sizes);
  return idx;
}

std::vector<std::uint64_t> ContextIndex::bucket_totals() const {
  std::vector<std::uint64_t> totals(cap_, 0);
  for (NodeId i = 0; i < num_nodes_; ++i)
    for (std::uint32_t k = 1; k <= cap_; ++k) totals[k - 1] += bucket(i, k).size();
  return totals;
}

}  // namespace hoplite
