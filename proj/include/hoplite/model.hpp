#pragma once

#include <cstdint>
#include <vector>

#include "hoplite/common.hpp"
#include "hoplite/graph.hpp"
#include "hoplite/sampler.hpp"

namespace hoplite {

struct ModelConfig {
  std::uint32_t input_dim = 0;       // feature dim d
  std::uint32_t embedding_dim = 512; // q
  std::uint32_t num_layers = 1;      // 1 (default) or 2 graph-conv layers
  std::uint32_t num_categories = 0;  // alpha

  void validate() const;
};

// Encoder weights (graph-conv layers, no bias) plus the category classifier
// head (affine). Layer 1 maps d -> q; an optional layer 2 maps q -> q.
struct ModelParams {
  std::vector<Mat> encoder_weights;
  Mat classifier_weight;  // q x alpha
  Vec classifier_bias;    // alpha

  std::uint32_t num_layers() const { return static_cast<std::uint32_t>(encoder_weights.size()); }
  std::uint32_t input_dim() const { return static_cast<std::uint32_t>(encoder_weights.front().rows()); }
  std::uint32_t embedding_dim() const { return static_cast<std::uint32_t>(encoder_weights.back().cols()); }
  std::uint32_t num_categories() const { return static_cast<std::uint32_t>(classifier_weight.cols()); }
  void validate() const;
};

struct Gradients {
  std::vector<Mat> encoder_weights;
  Mat classifier_weight;
  Vec classifier_bias;
};

// Everything backward() needs from the matching forward pass. Buffers are
// reused across steps once sized, so per-step allocation stays flat.
struct ForwardCache {
  std::vector<Mat> propagated;  // per layer: A_hat * (layer input)
  std::vector<Mat> pre;         // per layer: propagated * W_l
  Mat embeddings;               // Z = relu(pre.back()), n x q
  Mat interactions;             // U, one |z_t - z_c| row per pair, B x q
  Mat logits;                   // B x alpha
  Mat probs;                    // row-softmax of logits
};

// Entries uniform in [-sqrt(6/(fan_in+fan_out)), +sqrt(6/(fan_in+fan_out))],
// drawn in row-major order so initialization is reproducible.
Mat glorot_init(Eigen::Index fan_in, Eigen::Index fan_out, Rng& rng);

// Glorot weights for every layer and the classifier; zero classifier bias.
ModelParams init_params(const ModelConfig& config, Rng& rng);

// Element-wise absolute difference; the symmetric pair representation.
inline Vec interact(const Vec& zi, const Vec& zj) {
  if (zi.size() != zj.size()) throw DimensionError("interact: length mismatch");
  return (zi - zj).cwiseAbs();
}

// Full-graph transductive forward: Z = relu(A_hat X W_1) for one layer,
// relu(A_hat relu(A_hat X W_1) W_2) for two.
Mat encode(const NormalizedAdjacency& adj, const Mat& features, const ModelParams& params);

// Mean cross-entropy between softmax(classifier(|z_t - z_c|)) and the batch
// labels. Fills `cache` for the matching backward().
double forward_loss(const PairBatch& batch, const NormalizedAdjacency& adj, const Mat& features,
                    const ModelParams& params, ForwardCache& cache);

// Same, with A_hat * features supplied by the caller. The product is constant
// across training steps, so the trainer computes it once.
double forward_loss_cached(const PairBatch& batch, const Mat& propagated_features,
                           const NormalizedAdjacency& adj, const ModelParams& params,
                           ForwardCache& cache);

// Analytic gradients of the batch loss for every parameter. abs and relu use
// subgradient 0 at 0; pair gradients scatter-add into node rows in batch
// order (sequential, hence deterministic).
Gradients backward(const ForwardCache& cache, const PairBatch& batch,
                   const NormalizedAdjacency& adj, const ModelParams& params);

}  // namespace hoplite
