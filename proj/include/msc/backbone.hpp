#pragma once

#include <filesystem>

#include "msc/tensor.hpp"

namespace msc {

// Multi-resolution activations feeding the compression head: a high-resolution
// shallow map (Conv1-like, 109x109 for a 224 input) and a coarse deep map
// (Conv5-like, 13x13).
struct BackboneMaps {
  FeatureMap shallow;
  FeatureMap deep;
};

// Reads precomputed activations from two MSCT files.
BackboneMaps load_backbone_maps(const std::filesystem::path& shallow, const std::filesystem::path& deep);

// Deterministic stand-in for a pretrained CNN trunk so the head can run on raw
// frames. Shallow stage: fixed 7x7 stride-2 Gaussian-derivative filter bank
// plus gradient magnitude and two colour-opponent channels. Deep stage:
// rectified shallow responses average-pooled onto a grid one quarter the size
// of the max-pooled shallow grid, so both branches meet after resampling.
class ProxyBackbone {
 public:
  static constexpr std::size_t kShallowChannels = 10;
  static constexpr std::size_t kDeepChannels = 16;

  explicit ProxyBackbone(std::size_t input_size = 224);

  std::size_t input_size() const { return input_size_; }
  std::size_t shallow_size() const { return shallow_size_; }
  std::size_t fused_size() const { return fused_size_; }  // after max_pool(7, 2)
  std::size_t deep_size() const { return fused_size_ / 4; }

  // patch: input_size x input_size, 1 or 3 channels in [0,1].
  BackboneMaps operator()(const FeatureMap& patch) const;

 private:
  std::size_t input_size_;
  std::size_t shallow_size_;
  std::size_t fused_size_;
  std::vector<std::vector<double>> kernels_;  // 7x7 each
};

}  // namespace msc
