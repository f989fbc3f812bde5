#pragma once

#include <span>
#include <vector>

#include "msc/msc_head.hpp"

namespace msc {

struct SgdConfig {
  double learning_rate = 1e-5;
  double momentum = 0.9;
  double weight_decay = 5e-4;
};

// v <- m v - lr (grad + wd param); param <- param + v
void sgd_step(std::span<double> params, std::span<const double> grads, const SgdConfig& config,
              std::vector<double>& velocity);

// Momentum buffers for the four head tensors, lazily sized on the first step.
struct SgdState {
  SgdConfig config;
  std::vector<double> shallow_w, shallow_b, deep_w, deep_b;
};

void sgd_step(CompressionHead& head, const HeadGrad& grad, SgdState& state);

}  // namespace msc
