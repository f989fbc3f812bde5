#pragma once

#include "msc/tensor.hpp"

namespace msc {

// Channelwise max over kernel x kernel windows; output floor((H - k) / s) + 1 per axis.
FeatureMap max_pool(const FeatureMap& map, std::size_t kernel = 7, std::size_t stride = 2);

// Spatial upsampling by an integer factor with frozen bilinear weights
// (half-pixel centres, edge clamped).
FeatureMap upsample(const FeatureMap& map, std::size_t factor = 4);

// Pointwise linear layer. weights is C_in x C_out x 1, bias has C_out entries.
struct Conv1x1 {
  FeatureMap weights;
  std::vector<double> bias;

  std::size_t inputs() const { return weights.height(); }
  std::size_t outputs() const { return weights.width(); }
};

FeatureMap conv1x1(const FeatureMap& map, const Conv1x1& layer);

struct Conv1x1Grad {
  FeatureMap weights;  // C_in x C_out x 1
  std::vector<double> bias;
};

// Parameter gradients given the layer input and dL/d(output).
Conv1x1Grad conv1x1_backward(const FeatureMap& input, const Conv1x1& layer, const FeatureMap& upstream);
// dL/d(input).
FeatureMap conv1x1_backward_input(const Conv1x1& layer, const FeatureMap& upstream);

// Cross-channel local response normalisation:
//   y_c = v_c / (kappa + (alpha / n) * sum_{|j-c| <= n/2} v_j^2)^beta
struct LrnParams {
  std::size_t size = 5;
  double kappa = 2.0;
  double alpha = 1e-4;
  double beta = 0.75;
};

FeatureMap lrn(const FeatureMap& map, const LrnParams& params = {});
FeatureMap lrn_backward(const FeatureMap& input, const LrnParams& params, const FeatureMap& upstream);

}  // namespace msc
