#include "hoplite/model.hpp"

#include <cmath>
#include <string>

namespace hoplite {

void ModelConfig::validate() const {
  if (input_dim < 1) throw InvalidArgument("model: input_dim must be >= 1");
  if (embedding_dim < 1) throw InvalidArgument("model: embedding_dim must be >= 1");
  if (num_layers != 1 && num_layers != 2)
    throw InvalidArgument("model: num_layers must be 1 or 2");
  if (num_categories < 2) throw InvalidArgument("model: num_categories must be >= 2");
}

void ModelParams::validate() const {
  if (encoder_weights.empty() || encoder_weights.size() > 2)
    throw DimensionError("model params: expected 1 or 2 encoder layers");
  for (std::size_t l = 1; l < encoder_weights.size(); ++l)
    if (encoder_weights[l].rows() != encoder_weights[l - 1].cols())
      throw DimensionError("model params: encoder layer shapes do not chain");
  if (classifier_weight.rows() != encoder_weights.back().cols())
    throw DimensionError("model params: classifier input dim != embedding dim");
  if (classifier_bias.size() != classifier_weight.cols())
    throw DimensionError("model params: classifier bias length != category count");
}

Mat glorot_init(Eigen::Index fan_in, Eigen::Index fan_out, Rng& rng) {
  if (fan_in < 1 || fan_out < 1) throw InvalidArgument("glorot_init: dims must be positive");
  const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  Mat w(fan_in, fan_out);
  for (Eigen::Index r = 0; r < fan_in; ++r)
    for (Eigen::Index c = 0; c < fan_out; ++c) w(r, c) = rng.uniform(-bound, bound);
  return w;
}

ModelParams init_params(const ModelConfig& config, Rng& rng) {
  config.validate();
  ModelParams params;
  params.encoder_weights.push_back(glorot_init(config.input_dim, config.embedding_dim, rng));
  if (config.num_layers == 2)
    params.encoder_weights.push_back(glorot_init(config.embedding_dim, config.embedding_dim, rng));
  params.classifier_weight = glorot_init(config.embedding_dim, config.num_categories, rng);
  params.classifier_bias = Vec::Zero(config.num_categories);
  params.validate();
  return params;
}

namespace {

void check_feature_shape(const NormalizedAdjacency& adj, Eigen::Index feature_rows,
                         const ModelParams& params) {
  params.validate();
  if (feature_rows != static_cast<Eigen::Index>(adj.num_nodes))
    throw DimensionError("encode: feature rows != graph nodes");
}

// Shared forward core; propagated[0] must already hold A_hat * features.
void encode_into_cache(const NormalizedAdjacency& adj, const ModelParams& params,
                       ForwardCache& cache) {
  const std::size_t layers = params.encoder_weights.size();
  cache.propagated.resize(layers);
  cache.pre.resize(layers);
  if (cache.propagated[0].cols() != params.encoder_weights[0].rows())
    throw DimensionError("encode: feature dim != encoder input dim");
  cache.pre[0].noalias() = cache.propagated[0] * params.encoder_weights[0];
  if (layers == 2) {
    cache.propagated[1] = spmm(adj, cache.pre[0].cwiseMax(0.0));
    cache.pre[1].noalias() = cache.propagated[1] * params.encoder_weights[1];
  }
  cache.embeddings = cache.pre.back().cwiseMax(0.0);
}

double loss_from_embeddings(const PairBatch& batch, const ModelParams& params,
                            ForwardCache& cache) {
  const Eigen::Index b = static_cast<Eigen::Index>(batch.size());
  if (b == 0) throw InvalidArgument("forward_loss: empty batch");
  const Eigen::Index q = cache.embeddings.cols();
  const std::uint32_t alpha = params.num_categories();

  cache.interactions.resize(b, q);
  for (Eigen::Index i = 0; i < b; ++i)
    cache.interactions.row(i) =
        (cache.embeddings.row(batch.targets[i]) - cache.embeddings.row(batch.contexts[i]))
            .cwiseAbs();

  cache.logits.noalias() = cache.interactions * params.classifier_weight;
  cache.logits.rowwise() += params.classifier_bias.transpose();

  cache.probs.resize(b, alpha);
  double total = 0.0;
  for (Eigen::Index i = 0; i < b; ++i) {
    const std::uint32_t label = batch.labels[i];
    if (label >= alpha) throw InvalidArgument("forward_loss: label out of range");
    const double mx = cache.logits.row(i).maxCoeff();
    cache.probs.row(i) = (cache.logits.row(i).array() - mx).exp();
    const double denom = cache.probs.row(i).sum();
    cache.probs.row(i) /= denom;
    total += std::log(denom) + mx - cache.logits(i, label);
  }
  const double loss = total / static_cast<double>(b);
  if (!std::isfinite(loss))
    throw NumericError("forward_loss: non-finite loss over " + std::to_string(b) +
                       " pairs (max |logit| " +
                       std::to_string(cache.logits.cwiseAbs().maxCoeff()) + ")");
  return loss;
}

}  // namespace

Mat encode(const NormalizedAdjacency& adj, const Mat& features, const ModelParams& params) {
  check_feature_shape(adj, features.rows(), params);
  ForwardCache cache;
  cache.propagated.resize(params.encoder_weights.size());
  cache.propagated[0] = spmm(adj, features);
  encode_into_cache(adj, params, cache);
  if (!cache.embeddings.allFinite()) throw NumericError("encode: non-finite embeddings");
  return std::move(cache.embeddings);
}

double forward_loss(const PairBatch& batch, const NormalizedAdjacency& adj, const Mat& features,
                    const ModelParams& params, ForwardCache& cache) {
  check_feature_shape(adj, features.rows(), params);
  cache.propagated.resize(params.encoder_weights.size());
  cache.propagated[0] = spmm(adj, features);
  encode_into_cache(adj, params, cache);
  return loss_from_embeddings(batch, params, cache);
}

double forward_loss_cached(const PairBatch& batch, const Mat& propagated_features,
                           const NormalizedAdjacency& adj, const ModelParams& params,
                           ForwardCache& cache) {
  check_feature_shape(adj, propagated_features.rows(), params);
  cache.propagated.resize(params.encoder_weights.size());
  cache.propagated[0] = propagated_features;
  encode_into_cache(adj, params, cache);
  return loss_from_embeddings(batch, params, cache);
}

Gradients backward(const ForwardCache& cache, const PairBatch& batch,
                   const NormalizedAdjacency& adj, const ModelParams& params) {
  const Eigen::Index b = static_cast<Eigen::Index>(batch.size());
  if (b == 0 || cache.probs.rows() != b)
    throw InvalidArgument("backward: cache does not match batch");
  const std::size_t layers = params.encoder_weights.size();

  // d loss / d logits for mean cross-entropy: (softmax - onehot) / B.
  Mat dlogits = cache.probs;
  for (Eigen::Index i = 0; i < b; ++i) dlogits(i, batch.labels[i]) -= 1.0;
  dlogits /= static_cast<double>(b);

  Gradients grads;
  grads.classifier_weight.noalias() = cache.interactions.transpose() * dlogits;
  grads.classifier_bias = dlogits.colwise().sum().transpose();

  // Through |z_t - z_c|: sign carries to the target row, negated to the
  // context row. Scatter-add runs in batch order.
  Mat dpairs = dlogits * params.classifier_weight.transpose();  // B x q
  Mat dz = Mat::Zero(cache.embeddings.rows(), cache.embeddings.cols());
  const Eigen::Index q = cache.embeddings.cols();
  for (Eigen::Index i = 0; i < b; ++i) {
    const auto zt = cache.embeddings.row(batch.targets[i]);
    const auto zc = cache.embeddings.row(batch.contexts[i]);
    for (Eigen::Index j = 0; j < q; ++j) {
      const double diff = zt(j) - zc(j);
      const double s = diff > 0.0 ? 1.0 : (diff < 0.0 ? -1.0 : 0.0);
      const double g = dpairs(i, j) * s;
      dz(batch.targets[i], j) += g;
      dz(batch.contexts[i], j) -= g;
    }
  }

  grads.encoder_weights.resize(layers);
  Mat dpre = ((cache.pre.back().array() > 0.0).cast<double>() * dz.array()).matrix();
  for (std::size_t l = layers; l-- > 0;) {
    grads.encoder_weights[l].noalias() = cache.propagated[l].transpose() * dpre;
    if (l > 0) {
      // pre_l = A_hat * relu(pre_{l-1}) * W_l; A_hat is symmetric.
      const Mat back = spmm(adj, dpre * params.encoder_weights[l].transpose());
      dpre = ((cache.pre[l - 1].array() > 0.0).cast<double>() * back.array()).matrix();
    }
  }
  return grads;
}

}  // namespace hoplite
