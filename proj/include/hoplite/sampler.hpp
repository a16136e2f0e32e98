#pragma once

#include <cstdint>
#include <vector>

#include "hoplite/common.hpp"
#include "hoplite/context.hpp"

namespace hoplite {

struct SamplerConfig {
  std::uint32_t targets_per_batch = 256;
  std::uint32_t pairs_per_category_per_target = 4;
  std::uint64_t seed = 0;
  // When set, the far category also admits nodes in other components.
  // Off by default: unreachable pairs have no defined hop count.
  bool far_includes_unreachable = false;

  void validate() const;
};

// One batch of (target, context, category-label) training triples.
struct PairBatch {
  std::vector<NodeId> targets;
  std::vector<NodeId> contexts;
  std::vector<std::uint32_t> labels;

  std::size_t size() const { return targets.size(); }
};

// Draws one class-balanced batch from `rng`:
//   - targets uniformly without replacement; targets whose every category is
//     empty are passed over and redrawn,
//   - per target and per category, up to `pairs_per_category_per_target`
//     distinct contexts; a short category contributes all its members,
//   - the far category by rejection sampling (retry cap 1000 per draw).
// Batches are pure functions of the rng state: same state, same batch.
PairBatch sample_batch(const ContextIndex& index, const MergePolicy& policy,
                       const SamplerConfig& config, Rng& rng);

// Stateful convenience wrapper: batch b uses the stream split from
// (config.seed, b), so a training run's batch sequence is reproducible
// no matter who else consumed random numbers in between.
class PairSampler {
public:
  PairSampler(const ContextIndex& index, const MergePolicy& policy, SamplerConfig config);

  PairBatch next_batch() { return batch_at(counter_++); }
  PairBatch batch_at(std::uint64_t batch_counter) const;

  std::uint64_t batches_drawn() const { return counter_; }

private:
  const ContextIndex* index_;
  MergePolicy policy_;
  SamplerConfig config_;
  std::uint64_t counter_ = 0;
};

}  // namespace hoplite
