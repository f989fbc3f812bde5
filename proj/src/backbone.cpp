#include "msc/backbone.hpp"

#include <algorithm>
#include <cmath>

#include "msc/tensor_io.hpp"

namespace msc {

BackboneMaps load_backbone_maps(const std::filesystem::path& shallow, const std::filesystem::path& deep) {
  return BackboneMaps{load_msct(shallow), load_msct(deep)};
}

namespace {

constexpr int kTaps = 7;
constexpr int kHalf = 3;
constexpr double kSigma = 1.5;

}  // namespace

ProxyBackbone::ProxyBackbone(std::size_t input_size) : input_size_(input_size) {
  if (input_size < 21) throw std::invalid_argument("ProxyBackbone: input size must be >= 21");
  shallow_size_ = (input_size - kTaps) / 2 + 1;
  fused_size_ = (shallow_size_ - 7) / 2 + 1;
  if (fused_size_ % 4 != 0) {
    throw std::invalid_argument("ProxyBackbone: input size " + std::to_string(input_size) +
                                " gives a pooled grid of " + std::to_string(fused_size_) +
                                ", which is not divisible by 4");
  }
  // Gaussian, d/dx, d/dy, d2/dx2, d2/dy2, d2/dxdy, centre-surround.
  const double s2 = kSigma * kSigma;
  std::vector<double> g(kTaps * kTaps);
  double gsum = 0.0;
  for (int y = -kHalf; y <= kHalf; ++y)
    for (int x = -kHalf; x <= kHalf; ++x) {
      const double v = std::exp(-(x * x + y * y) / (2 * s2));
      g[(y + kHalf) * kTaps + x + kHalf] = v;
      gsum += v;
    }
  for (auto& v : g) v /= gsum;
  kernels_.assign(7, std::vector<double>(kTaps * kTaps));
  for (int y = -kHalf; y <= kHalf; ++y) {
    for (int x = -kHalf; x <= kHalf; ++x) {
      const int i = (y + kHalf) * kTaps + x + kHalf;
      const double gv = g[i];
      kernels_[0][i] = gv;
      kernels_[1][i] = -x / s2 * gv;
      kernels_[2][i] = -y / s2 * gv;
      kernels_[3][i] = (x * x / s2 - 1.0) / s2 * gv;
      kernels_[4][i] = (y * y / s2 - 1.0) / s2 * gv;
      kernels_[5][i] = x * y / (s2 * s2) * gv;
      kernels_[6][i] = gv - 1.0 / (kTaps * kTaps);
    }
  }
}

BackboneMaps ProxyBackbone::operator()(const FeatureMap& patch) const {
  if (patch.height() != input_size_ || patch.width() != input_size_) {
    throw std::invalid_argument("ProxyBackbone: expected " + std::to_string(input_size_) + "x" +
                                std::to_string(input_size_) + " patch, got " + to_string(patch.shape()));
  }
  if (patch.channels() != 1 && patch.channels() != 3) {
    throw std::invalid_argument("ProxyBackbone: patch must have 1 or 3 channels");
  }
  const std::size_t n = input_size_;
  const bool color = patch.channels() == 3;
  std::vector<double> gray(n * n), rg(n * n, 0.0), by(n * n, 0.0);
  for (std::size_t i = 0; i < n * n; ++i) {
    if (color) {
      const double r = patch[3 * i], gch = patch[3 * i + 1], b = patch[3 * i + 2];
      gray[i] = 0.299 * r + 0.587 * gch + 0.114 * b;
      rg[i] = r - gch;
      by[i] = b - 0.5 * (r + gch);
    } else {
      gray[i] = patch[i];
    }
  }

  const std::size_t s = shallow_size_;
  FeatureMap shallow(s, s, kShallowChannels, 0.0);
  for (std::size_t r = 0; r < s; ++r) {
    for (std::size_t c = 0; c < s; ++c) {
      double acc[7] = {};
      double crg = 0.0, cby = 0.0;
      for (int y = 0; y < kTaps; ++y) {
        const std::size_t row = (2 * r + static_cast<std::size_t>(y)) * n + 2 * c;
        for (int x = 0; x < kTaps; ++x) {
          const double v = gray[row + static_cast<std::size_t>(x)];
          const int k = y * kTaps + x;
          for (int f = 0; f < 7; ++f) acc[f] += kernels_[f][k] * v;
          if (color) {
            crg += kernels_[0][k] * rg[row + static_cast<std::size_t>(x)];
            cby += kernels_[0][k] * by[row + static_cast<std::size_t>(x)];
          }
        }
      }
      double* out = &shallow(r, c, 0);
      for (int f = 0; f < 7; ++f) out[f] = acc[f];
      out[7] = std::hypot(acc[1], acc[2]);
      out[8] = crg;
      out[9] = cby;
    }
  }

  // Deep stage: positive and negative parts of the first 8 shallow channels,
  // averaged over a coarse grid.
  const std::size_t ds = deep_size();
  FeatureMap deep(ds, ds, kDeepChannels, 0.0);
  for (std::size_t br = 0; br < ds; ++br) {
    const std::size_t r0 = br * s / ds, r1 = (br + 1) * s / ds;
    for (std::size_t bc = 0; bc < ds; ++bc) {
      const std::size_t c0 = bc * s / ds, c1 = (bc + 1) * s / ds;
      double* out = &deep(br, bc, 0);
      for (std::size_t r = r0; r < r1; ++r) {
        for (std::size_t c = c0; c < c1; ++c) {
          const double* v = &shallow(r, c, 0);
          for (std::size_t f = 0; f < 8; ++f) {
            out[2 * f] += std::max(v[f], 0.0);
            out[2 * f + 1] += std::max(-v[f], 0.0);
          }
        }
      }
      const double inv = 1.0 / static_cast<double>((r1 - r0) * (c1 - c0));
      for (std::size_t f = 0; f < kDeepChannels; ++f) out[f] *= inv;
    }
  }
  return BackboneMaps{std::move(shallow), std::move(deep)};
}

}  // namespace msc
