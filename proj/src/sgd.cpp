#include "msc/sgd.hpp"

#include <stdexcept>

namespace msc {

void sgd_step(std::span<double> params, std::span<const double> grads, const SgdConfig& config,
              std::vector<double>& velocity) {
  if (params.size() != grads.size()) throw std::invalid_argument("sgd_step: parameter/gradient size mismatch");
  if (velocity.empty()) velocity.assign(params.size(), 0.0);
  if (velocity.size() != params.size()) throw std::invalid_argument("sgd_step: velocity size mismatch");
  for (std::size_t i = 0; i < params.size(); ++i) {
    velocity[i] = config.momentum * velocity[i] - config.learning_rate * (grads[i] + config.weight_decay * params[i]);
    params[i] += velocity[i];
  }
}

void sgd_step(CompressionHead& head, const HeadGrad& grad, SgdState& state) {
  sgd_step(head.shallow.weights.values(), grad.shallow.weights.values(), state.config, state.shallow_w);
  sgd_step(head.shallow.bias, grad.shallow.bias, state.config, state.shallow_b);
  sgd_step(head.deep.weights.values(), grad.deep.weights.values(), state.config, state.deep_w);
  sgd_step(head.deep.bias, grad.deep.bias, state.config, state.deep_b);
}

}  // namespace msc
