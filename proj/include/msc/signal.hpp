#pragma once

#include "msc/tensor.hpp"

namespace msc {

// Periodic Gaussian regression target. Distances wrap around the map so the
// label is consistent with the circulant sample model.
struct GaussianLabel {
  std::size_t height = 0;
  std::size_t width = 0;
  double center_row = 0.0;
  double center_col = 0.0;
  double sigma = 0.0;
  FeatureMap values;  // height x width x 1
};

GaussianLabel gaussian_label(std::size_t height, std::size_t width, double center_row,
                             double center_col, double sigma);

// sqrt(target_h_cells * target_w_cells) / 10
double default_label_sigma(double target_h_cells, double target_w_cells);

// Separable Hann taper, zero on the border rows/cols, single channel.
FeatureMap hann_window(std::size_t height, std::size_t width);

// Multiplies every channel by a single-channel window.
FeatureMap apply_window(const FeatureMap& map, const FeatureMap& window);

// Direct spatial circular correlation summed over channels:
//   r[m,n] = sum_l sum_{p,q} h^l[p,q] z^l[(p+m) mod H, (q+n) mod W]
// O(H^2 W^2 D). Intended as a reference for the Fourier-domain path.
FeatureMap circular_correlate_spatial(const FeatureMap& h, const FeatureMap& z);

}  // namespace msc
