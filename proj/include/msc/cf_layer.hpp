#pragma once

#include "msc/signal.hpp"
#include "msc/tensor.hpp"

namespace msc {

inline constexpr double kDefaultCfLambda = 1e-4;

// Everything the backward pass needs from one forward evaluation.
struct CfLayerTape {
  Spectrum x_hat;           // H x W x D
  Spectrum z_hat;           // H x W x D
  Spectrum g_hat;           // H x W x 1
  std::vector<double> denominator;  // sum_k |x_hat^k|^2 + lambda, per bin
  Spectrum filter_hat;      // x_hat^l conj(g_hat) / denominator
  FeatureMap response;      // H x W x 1
  double lambda = kDefaultCfLambda;
  double response_imag = 0.0;  // largest |imag| of the inverse transform before it is dropped
};

struct CfForward {
  double loss = 0.0;
  FeatureMap response;
  CfLayerTape tape;
};

// Correlation-filter loss layer:
//   filter_hat^l = x_hat^l conj(g_hat) / (sum_k x_hat^k conj(x_hat^k) + lambda)
//   r = IDFT(sum_l conj(filter_hat^l) z_hat^l)
//   loss = ||r - g||^2
CfForward cf_forward(const FeatureMap& phi_x, const FeatureMap& phi_z, const GaussianLabel& g,
                     double lambda = kDefaultCfLambda);

struct CfGrad {
  FeatureMap d_phi_x;
  FeatureMap d_phi_z;
};

// Given dL/dr, returns dL/dphi_x and dL/dphi_z. For the layer's own loss pass
// upstream = 2 (r - g).
CfGrad cf_backward(const CfLayerTape& tape, const FeatureMap& upstream);

// upstream for the squared-error loss above.
FeatureMap cf_loss_upstream(const CfForward& fwd, const GaussianLabel& g);

}  // namespace msc
