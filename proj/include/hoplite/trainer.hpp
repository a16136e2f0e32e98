#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "hoplite/common.hpp"
#include "hoplite/context.hpp"
#include "hoplite/graph.hpp"
#include "hoplite/model.hpp"
#include "hoplite/optimizer.hpp"
#include "hoplite/sampler.hpp"

namespace hoplite {

// One training cell. config.seed drives parameter initialization and the
// batch streams; the sampler config's own seed field is ignored here so a
// run is reproducible from a single number.
struct TrainConfig {
  MergePolicy policy = MergePolicy::default_policy();
  std::uint32_t embedding_dim = 512;
  std::uint32_t num_layers = 1;
  std::uint32_t epochs = 100;
  double lr = 0.001;
  SamplerConfig sampler;
  std::uint64_t seed = 0;
  std::uint32_t batches_per_epoch = 0;  // 0: ceil(n / targets_per_batch)
  bool deterministic = true;            // forces sequential sparse products
  double divergence_threshold = 1e6;
  std::string checkpoint_path;   // written when nonempty
  std::string embeddings_path;   // written when nonempty

  // Progress hook (1-based epoch number, mean epoch loss, elapsed seconds).
  std::function<void(std::uint32_t, double, double)> on_epoch;

  void validate() const;
};

struct RunReport {
  std::vector<double> epoch_losses;
  double final_loss = 0.0;
  double wall_seconds = 0.0;
  std::uint64_t steps = 0;
  std::string checkpoint_path;
  std::string embeddings_path;
};

struct TrainResult {
  ModelParams params;
  AdamState adam;
  Mat embeddings;
  RunReport report;
};

// Runs epochs x batches of sample -> forward -> backward -> adam. On
// divergence (non-finite loss or loss above the threshold) the parameters
// from the last completed epoch are written to checkpoint_path (when set)
// and a NumericError is thrown.
TrainResult train(const Graph& g, const Mat& features, const ContextIndex& index,
                  const TrainConfig& config);

// Text embeddings: "# n q" header, then one "id v1 ... vq" row per node in
// row order, ids drawn from original_ids, values printed with %.17g so the
// round-trip is exact.
void export_embeddings(const Mat& z, const std::string& path,
                       const std::vector<std::uint64_t>& original_ids);
std::pair<Mat, std::vector<std::uint64_t>> import_embeddings(const std::string& path);

// Versioned little-endian binary checkpoint: model weights, Adam state and
// the final embedding matrix.
struct Checkpoint {
  ModelParams params;
  AdamState adam;
  Mat embeddings;
};
void save_checkpoint(const std::string& path, const ModelParams& params, const AdamState& adam,
                     const Mat& embeddings);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace hoplite
