#pragma once

#include <cstdint>
#include <filesystem>

#include "msc/tensor.hpp"

namespace msc {

// 8-bit frame, 1 (gray) or 3 (RGB) channels.
using Image = Tensor3<std::uint8_t>;

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct Size2 {
  double width = 0.0;
  double height = 0.0;
};

// Bilinearly resampled crop with values in [0,1]. The crop rectangle is kept
// so feature-grid displacements can be mapped back to frame pixels.
struct ImagePatch {
  FeatureMap pixels;
  double crop_x = 0.0;  // top-left of the crop in frame coordinates
  double crop_y = 0.0;
  double crop_width = 0.0;
  double crop_height = 0.0;

  double source_per_pixel_x() const { return crop_width / static_cast<double>(pixels.width()); }
  double source_per_pixel_y() const { return crop_height / static_cast<double>(pixels.height()); }
};

// Frame coordinates are continuous: pixel i covers [i, i+1), so its centre is i + 0.5.
// The crop is target_size * (1 + padding) per axis, centred on `center`, resampled to
// out_height x out_width. Out-of-frame samples replicate the nearest edge pixel.
ImagePatch extract_patch(const Image& image, Point2 center, Size2 target_size, double padding,
                         std::size_t out_height, std::size_t out_width);

// Same sampling rule with an explicit crop size.
ImagePatch extract_crop(const Image& image, Point2 center, Size2 crop_size, std::size_t out_height,
                        std::size_t out_width);

FeatureMap to_gray(const FeatureMap& rgb);

Image load_image(const std::filesystem::path& path);  // PNG, binary PGM (P5) or PPM (P6)
void save_png(const std::filesystem::path& path, const Image& image);

}  // namespace msc
