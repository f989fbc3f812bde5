#include "msc/signal.hpp"

#include <cmath>
#include <numbers>

namespace msc {
namespace {

double wrapped_distance(double a, double b, double period) {
  double d = std::fmod(a - b, period);
  if (d < 0) d += period;
  return std::min(d, period - d);
}

}  // namespace

GaussianLabel gaussian_label(std::size_t height, std::size_t width, double center_row,
                             double center_col, double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw std::invalid_argument("gaussian_label: sigma must be positive");
  }
  GaussianLabel label{height, width, center_row, center_col, sigma, FeatureMap(height, width, 1)};
  const double inv = 1.0 / (2.0 * sigma * sigma);
  for (std::size_t r = 0; r < height; ++r) {
    const double dr = wrapped_distance(static_cast<double>(r), center_row, static_cast<double>(height));
    for (std::size_t c = 0; c < width; ++c) {
      const double dc = wrapped_distance(static_cast<double>(c), center_col, static_cast<double>(width));
      label.values(r, c) = std::exp(-(dr * dr + dc * dc) * inv);
    }
  }
  return label;
}

double default_label_sigma(double target_h_cells, double target_w_cells) {
  return std::sqrt(target_h_cells * target_w_cells) / 10.0;
}

FeatureMap hann_window(std::size_t height, std::size_t width) {
  auto taper = [](std::size_t n) {
    std::vector<double> w(n, 1.0);
    if (n == 1) return w;
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                   static_cast<double>(n - 1)));
    }
    return w;
  };
  const auto wr = taper(height);
  const auto wc = taper(width);
  FeatureMap out(height, width, 1);
  for (std::size_t r = 0; r < height; ++r)
    for (std::size_t c = 0; c < width; ++c) out(r, c) = wr[r] * wc[c];
  return out;
}

FeatureMap apply_window(const FeatureMap& map, const FeatureMap& window) {
  if (window.channels() != 1 || window.height() != map.height() || window.width() != map.width()) {
    throw std::invalid_argument("apply_window: window " + to_string(window.shape()) +
                                " does not fit map " + to_string(map.shape()));
  }
  FeatureMap out = map;
  const std::size_t d = map.channels();
  for (std::size_t i = 0; i < map.shape().plane(); ++i)
    for (std::size_t l = 0; l < d; ++l) out[i * d + l] *= window[i];
  return out;
}

FeatureMap circular_correlate_spatial(const FeatureMap& h, const FeatureMap& z) {
  require_same_shape(h.shape(), z.shape(), "circular_correlate_spatial");
  const std::size_t rows = h.height();
  const std::size_t cols = h.width();
  FeatureMap out(rows, cols, 1);
  for (std::size_t m = 0; m < rows; ++m) {
    for (std::size_t n = 0; n < cols; ++n) {
      double acc = 0.0;
      for (std::size_t p = 0; p < rows; ++p) {
        const std::size_t pr = (p + m) % rows;
        for (std::size_t q = 0; q < cols; ++q) {
          const std::size_t qc = (q + n) % cols;
          for (std::size_t l = 0; l < h.channels(); ++l) acc += h(p, q, l) * z(pr, qc, l);
        }
      }
      out(m, n) = acc;
    }
  }
  return out;
}

}  // namespace msc
