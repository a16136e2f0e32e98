#include "hoplite/optimizer.hpp"

#include <cmath>

namespace hoplite {
namespace {

template <typename T>
void update_tensor(T& param, const T& grad, T& m, T& v, double lr, double beta1, double beta2,
                   double eps, double corr1, double corr2) {
  if (param.rows() != grad.rows() || param.cols() != grad.cols())
    throw DimensionError("adam_step: gradient shape does not match parameter");
  if (!grad.allFinite()) throw NumericError("adam_step: non-finite gradient entry");
  m.array() = beta1 * m.array() + (1.0 - beta1) * grad.array();
  v.array() = beta2 * v.array() + (1.0 - beta2) * grad.array().square();
  param.array() -= lr * (m.array() / corr1) / ((v.array() / corr2).sqrt() + eps);
}

}  // namespace

AdamState AdamState::create(const ModelParams& params, double lr) {
  if (!(lr > 0.0)) throw InvalidArgument("adam: lr must be positive");
  AdamState state;
  state.lr = lr;
  for (const Mat& w : params.encoder_weights) {
    state.m_encoder.push_back(Mat::Zero(w.rows(), w.cols()));
    state.v_encoder.push_back(Mat::Zero(w.rows(), w.cols()));
  }
  state.m_classifier = Mat::Zero(params.classifier_weight.rows(), params.classifier_weight.cols());
  state.v_classifier = state.m_classifier;
  state.m_bias = Vec::Zero(params.classifier_bias.size());
  state.v_bias = state.m_bias;
  return state;
}

void AdamState::validate(const ModelParams& params) const {
  if (!(lr > 0.0)) throw InvalidArgument("adam: lr must be positive");
  if (m_encoder.size() != params.encoder_weights.size() ||
      v_encoder.size() != params.encoder_weights.size())
    throw DimensionError("adam: accumulator count does not match encoder layers");
  for (std::size_t l = 0; l < m_encoder.size(); ++l)
    if (m_encoder[l].rows() != params.encoder_weights[l].rows() ||
        m_encoder[l].cols() != params.encoder_weights[l].cols())
      throw DimensionError("adam: encoder accumulator shape mismatch");
  if (m_classifier.rows() != params.classifier_weight.rows() ||
      m_classifier.cols() != params.classifier_weight.cols() ||
      m_bias.size() != params.classifier_bias.size())
    throw DimensionError("adam: classifier accumulator shape mismatch");
}

void adam_step(ModelParams& params, const Gradients& grads, AdamState& state) {
  state.validate(params);
  if (grads.encoder_weights.size() != params.encoder_weights.size())
    throw DimensionError("adam_step: gradient layer count mismatch");
  state.t += 1;
  const double corr1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
  const double corr2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));
  for (std::size_t l = 0; l < params.encoder_weights.size(); ++l)
    update_tensor(params.encoder_weights[l], grads.encoder_weights[l], state.m_encoder[l],
                  state.v_encoder[l], state.lr, state.beta1, state.beta2, state.eps, corr1, corr2);
  update_tensor(params.classifier_weight, grads.classifier_weight, state.m_classifier,
                state.v_classifier, state.lr, state.beta1, state.beta2, state.eps, corr1, corr2);
  update_tensor(params.classifier_bias, grads.classifier_bias, state.m_bias, state.v_bias,
                state.lr, state.beta1, state.beta2, state.eps, corr1, corr2);
}

}  // namespace hoplite
