#include "hoplite/sampler.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace hoplite {
namespace {

constexpr int kFarRetryCap = 1000;

// Far-category pool size for a target: nodes beyond the cap, minus the
// target itself, restricted to the target's component unless the config
// admits unreachable nodes.
std::uint64_t far_pool_size(const ContextIndex& index, const SamplerConfig& config, NodeId t) {
  const std::uint64_t within = index.within_cap_size(t);
  const std::uint64_t universe =
      config.far_includes_unreachable ? index.num_nodes() : index.component_size(t);
  return universe - 1 - within;
}

// Draws `k` distinct positions from [0, m). For small k a rejection loop is
// cheap; once k is a large fraction of m, a partial Fisher-Yates pass over a
// materialized index range is the safer bound.
void draw_distinct(Rng& rng, std::uint64_t m, std::uint64_t k, std::vector<std::uint64_t>& out) {
  out.clear();
  if (k >= m) {
    out.resize(m);
    std::iota(out.begin(), out.end(), std::uint64_t{0});
    return;
  }
  if (k * 2 >= m) {
    std::vector<std::uint64_t> pool(m);
    std::iota(pool.begin(), pool.end(), std::uint64_t{0});
    for (std::uint64_t i = 0; i < k; ++i) {
      std::swap(pool[i], pool[i + rng.uniform_below(m - i)]);
      out.push_back(pool[i]);
    }
    return;
  }
  while (out.size() < k) {
    const std::uint64_t r = rng.uniform_below(m);
    if (std::find(out.begin(), out.end(), r) == out.end()) out.push_back(r);
  }
}

}  // namespace

void SamplerConfig::validate() const {
  if (targets_per_batch < 1) throw InvalidArgument("sampler: targets_per_batch must be >= 1");
  if (pairs_per_category_per_target < 1)
    throw InvalidArgument("sampler: pairs_per_category_per_target must be >= 1");
}

PairBatch sample_batch(const ContextIndex& index, const MergePolicy& policy,
                       const SamplerConfig& config, Rng& rng) {
  policy.validate();
  config.validate();
  if (index.num_nodes() == 0) throw InvalidArgument("sample_batch: empty graph");
  if (index.cap() != policy.cap())
    throw InvalidArgument("sample_batch: context index cap " + std::to_string(index.cap()) +
                          " does not match policy cap " + std::to_string(policy.cap()));

  const std::uint32_t n = index.num_nodes();
  const std::uint32_t alpha = policy.alpha();
  const std::uint64_t quota = config.pairs_per_category_per_target;

  PairBatch batch;
  batch.targets.reserve(static_cast<std::size_t>(config.targets_per_batch) * alpha * quota);
  batch.contexts.reserve(batch.targets.capacity());
  batch.labels.reserve(batch.targets.capacity());

  // Uniform targets without replacement: one partial Fisher-Yates sweep,
  // passing over (and redrawing past) targets whose every category is empty.
  std::vector<NodeId> pool(n);
  std::iota(pool.begin(), pool.end(), NodeId{0});
  std::uint32_t taken = 0;
  std::vector<std::uint64_t> picks;
  std::vector<NodeId> far_picks;
  std::vector<NodeId> far_pool;
  for (std::uint32_t k = 0; k < n && taken < config.targets_per_batch; ++k) {
    std::swap(pool[k], pool[k + rng.uniform_below(n - k)]);
    const NodeId t = pool[k];
    const std::uint64_t far_n = far_pool_size(index, config, t);
    if (index.within_cap_size(t) == 0 && far_n == 0) continue;  // no context at all
    ++taken;

    // Bucket-backed categories 0 .. alpha-2: hops (lo, hi] from the policy.
    std::uint32_t lo = 0;
    for (std::uint32_t c = 0; c + 1 < alpha; ++c) {
      const std::uint32_t hi = policy.boundaries[c];
      std::uint64_t m = 0;
      for (std::uint32_t hop = lo + 1; hop <= hi; ++hop) m += index.bucket(t, hop).size();
      if (m > 0) {
        draw_distinct(rng, m, std::min<std::uint64_t>(quota, m), picks);
        std::sort(picks.begin(), picks.end());
        std::uint64_t base = 0;
        std::size_t next = 0;
        for (std::uint32_t hop = lo + 1; hop <= hi && next < picks.size(); ++hop) {
          const auto bucket = index.bucket(t, hop);
          for (; next < picks.size() && picks[next] < base + bucket.size(); ++next) {
            batch.targets.push_back(t);
            batch.contexts.push_back(bucket[picks[next] - base]);
            batch.labels.push_back(c);
          }
          base += bucket.size();
        }
      }
      lo = hi;
    }

    // Far category: rejection against the within-cap membership test. When
    // the pool is a sliver of the node set (small components under the
    // exclusion default), rejection would burn its retry budget, so the pool
    // is materialized for that target instead; both paths draw uniformly
    // from the same set.
    if (far_n > 0) {
      const std::uint64_t want = std::min<std::uint64_t>(quota, far_n);
      if (far_n * 16 >= n) {
        far_picks.clear();
        while (far_picks.size() < want) {
          bool hit = false;
          for (int attempt = 0; attempt < kFarRetryCap; ++attempt) {
            const NodeId v = static_cast<NodeId>(rng.uniform_below(n));
            if (v == t) continue;
            if (!config.far_includes_unreachable &&
                index.component_of()[v] != index.component_of()[t])
              continue;
            if (index.within_cap(t, v)) continue;
            if (std::find(far_picks.begin(), far_picks.end(), v) != far_picks.end()) continue;
            far_picks.push_back(v);
            batch.targets.push_back(t);
            batch.contexts.push_back(v);
            batch.labels.push_back(alpha - 1);
            hit = true;
            break;
          }
          if (!hit)
            throw SamplingError("far-category rejection sampling exceeded " +
                                std::to_string(kFarRetryCap) + " retries at node " +
                                std::to_string(t) + " (pool size " + std::to_string(far_n) +
                                " of " + std::to_string(n) + " nodes)");
        }
      } else {
        far_pool.clear();
        for (NodeId v = 0; v < n; ++v) {
          if (v == t) continue;
          if (!config.far_includes_unreachable &&
              index.component_of()[v] != index.component_of()[t])
            continue;
          if (index.within_cap(t, v)) continue;
          far_pool.push_back(v);
        }
        draw_distinct(rng, far_pool.size(), want, picks);
        for (const std::uint64_t p : picks) {
          batch.targets.push_back(t);
          batch.contexts.push_back(far_pool[p]);
          batch.labels.push_back(alpha - 1);
        }
      }
    }
  }

  if (taken == 0) throw SamplingError("sample_batch: no node has a nonempty context");
  return batch;
}

PairSampler::PairSampler(const ContextIndex& index, const MergePolicy& policy,
                         SamplerConfig config)
    : index_(&index), policy_(policy), config_(config) {
  policy_.validate();
  config_.validate();
  if (index.cap() != policy.cap())
    throw InvalidArgument("sampler: context index cap does not match policy cap");
}

PairBatch PairSampler::batch_at(std::uint64_t batch_counter) const {
  Rng rng = Rng::substream(config_.seed, batch_counter);
  return sample_batch(*index_, policy_, config_, rng);
}

}  // namespace hoplite
