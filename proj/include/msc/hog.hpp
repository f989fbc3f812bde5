#pragma once

#include "msc/tensor.hpp"

namespace msc {

inline constexpr std::size_t kHogChannels = 32;

// Felzenszwalb-style HOG, 31 channels per cell plus one all-zero channel:
//   0..17  contrast-sensitive orientations (20 degree bins over 360)
//   18..26 contrast-insensitive orientations
//   27..30 texture (gradient energy under each of the four block normalisations)
//   31     zero
// Output is floor(H/cell) x floor(W/cell). Blocks that fall off the cell grid
// reuse the nearest cell (edge clamping).
FeatureMap hog(const FeatureMap& patch, std::size_t cell_size = 4);

}  // namespace msc
