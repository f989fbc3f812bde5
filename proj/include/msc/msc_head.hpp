#pragma once

#include <cstdint>
#include <filesystem>

#include "msc/layers.hpp"

namespace msc {

inline constexpr std::size_t kShallowOut = 32;
inline constexpr std::size_t kDeepOut = 64;
inline constexpr std::size_t kMscChannels = kShallowOut + kDeepOut;

// Trainable part of the feature network: one 1x1 compression per branch and a
// shared LRN setting. Channels 0..31 of the output come from the shallow
// branch, 32..95 from the deep branch.
struct CompressionHead {
  Conv1x1 shallow;  // C_s x 32
  Conv1x1 deep;     // C_d x 64
  LrnParams lrn;

  // Gaussian weights with variance 1/C_in, zero biases.
  static CompressionHead random(std::size_t shallow_in, std::size_t deep_in, std::uint64_t seed);
  void validate() const;
};

// Frozen resampling stage: max_pool(7, 2) on the shallow map, 4x bilinear upsampling
// on the deep map. Cached once per sample during training.
struct ResampledMaps {
  FeatureMap shallow;
  FeatureMap deep;
};

ResampledMaps resample_branches(const FeatureMap& shallow, const FeatureMap& deep);

// Intermediate activations kept for the backward pass.
struct HeadActivations {
  FeatureMap shallow_compressed;
  FeatureMap deep_compressed;
  FeatureMap features;  // concat(lrn(shallow_compressed), lrn(deep_compressed))
};

HeadActivations head_forward(const ResampledMaps& inputs, const CompressionHead& head);

struct HeadGrad {
  Conv1x1Grad shallow;
  Conv1x1Grad deep;
};

HeadGrad head_backward(const ResampledMaps& inputs, const HeadActivations& acts, const CompressionHead& head,
                       const FeatureMap& upstream);
void accumulate(HeadGrad& into, const HeadGrad& grad, double scale = 1.0);
HeadGrad zero_grad(const CompressionHead& head);

// concat(lrn(conv1x1(max_pool(shallow))), lrn(conv1x1(upsample(deep)))).
FeatureMap msc_features(const FeatureMap& shallow, const FeatureMap& deep, const CompressionHead& head);

// Checkpoint = <stem>.weights.msct, <stem>.biases.msct, <stem>.json.
// Weights are packed as a 1 x (C_s*32 + C_d*64) x 1 tensor (shallow block first,
// row-major C_in x C_out); biases as 1 x 96 x 1. The JSON sidecar records the
// input channel counts and LRN parameters.
void save_head(const std::filesystem::path& stem, const CompressionHead& head);
CompressionHead load_head(const std::filesystem::path& stem);

}  // namespace msc
