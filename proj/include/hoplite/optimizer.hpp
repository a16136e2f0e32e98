#pragma once

#include <cstdint>
#include <vector>

#include "hoplite/common.hpp"
#include "hoplite/model.hpp"

namespace hoplite {

// Adam accumulators for every model tensor, plus the hyperparameters.
// Defaults are the standard Adam values.
struct AdamState {
  double lr = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  std::uint64_t t = 0;

  std::vector<Mat> m_encoder, v_encoder;
  Mat m_classifier, v_classifier;
  Vec m_bias, v_bias;

  static AdamState create(const ModelParams& params, double lr);
  void validate(const ModelParams& params) const;
};

// Standard bias-corrected Adam update, in place on the trainer's exclusive
// copy of the parameters. Throws NumericError on any non-finite gradient.
void adam_step(ModelParams& params, const Gradients& grads, AdamState& state);

}  // namespace hoplite
