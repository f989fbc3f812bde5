#include "msc/hog.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace msc {
namespace {

constexpr double kEps = 0.0001;
constexpr double kTruncate = 0.2;

struct Directions {
  std::array<double, 9> u{};
  std::array<double, 9> v{};
  Directions() {
    for (int o = 0; o < 9; ++o) {
      u[o] = std::cos(o * std::numbers::pi / 9.0);
      v[o] = std::sin(o * std::numbers::pi / 9.0);
    }
  }
};

}  // namespace

FeatureMap hog(const FeatureMap& patch, std::size_t cell_size) {
  if (cell_size == 0) throw std::invalid_argument("hog: cell size must be positive");
  if (patch.height() < cell_size || patch.width() < cell_size) {
    throw std::invalid_argument("hog: patch " + to_string(patch.shape()) + " smaller than one cell");
  }
  static const Directions dirs;
  const long h = static_cast<long>(patch.height());
  const long w = static_cast<long>(patch.width());
  const long ch = static_cast<long>(patch.height() / cell_size);
  const long cw = static_cast<long>(patch.width() / cell_size);
  const double cs = static_cast<double>(cell_size);

  std::vector<double> hist(static_cast<std::size_t>(ch * cw * 18), 0.0);
  auto H = [&](long r, long c, int o) -> double& { return hist[static_cast<std::size_t>((r * cw + c) * 18 + o)]; };

  for (long y = 0; y < h; ++y) {
    for (long x = 0; x < w; ++x) {
      // Strongest colour channel; centred differences with clamped borders.
      double dx = 0.0, dy = 0.0, best_mag = -1.0;
      for (std::size_t d = 0; d < patch.channels(); ++d) {
        const double gx = patch(y, std::min(x + 1, w - 1), d) - patch(y, std::max(x - 1, 0L), d);
        const double gy = patch(std::min(y + 1, h - 1), x, d) - patch(std::max(y - 1, 0L), x, d);
        const double m = gx * gx + gy * gy;
        if (m > best_mag) {
          best_mag = m;
          dx = gx;
          dy = gy;
        }
      }
      const double mag = std::sqrt(best_mag);
      if (mag == 0.0) continue;

      double best_dot = 0.0;
      int best_o = 0;
      for (int o = 0; o < 9; ++o) {
        const double dot = dirs.u[o] * dx + dirs.v[o] * dy;
        if (dot > best_dot) {
          best_dot = dot;
          best_o = o;
        } else if (-dot > best_dot) {
          best_dot = -dot;
          best_o = o + 9;
        }
      }

      // Bilinear vote into the four surrounding cells.
      const double xp = (static_cast<double>(x) + 0.5) / cs - 0.5;
      const double yp = (static_cast<double>(y) + 0.5) / cs - 0.5;
      const long ixp = static_cast<long>(std::floor(xp));
      const long iyp = static_cast<long>(std::floor(yp));
      const double vx0 = xp - static_cast<double>(ixp);
      const double vy0 = yp - static_cast<double>(iyp);
      const double vx1 = 1.0 - vx0;
      const double vy1 = 1.0 - vy0;
      auto vote = [&](long r, long c, double wgt) {
        if (r >= 0 && r < ch && c >= 0 && c < cw) H(r, c, best_o) += wgt * mag;
      };
      vote(iyp, ixp, vx1 * vy1);
      vote(iyp, ixp + 1, vx0 * vy1);
      vote(iyp + 1, ixp, vx1 * vy0);
      vote(iyp + 1, ixp + 1, vx0 * vy0);
    }
  }

  std::vector<double> energy(static_cast<std::size_t>(ch * cw), 0.0);
  for (long i = 0; i < ch * cw; ++i) {
    double e = 0.0;
    for (int o = 0; o < 9; ++o) {
      const double s = hist[static_cast<std::size_t>(i * 18 + o)] + hist[static_cast<std::size_t>(i * 18 + o + 9)];
      e += s * s;
    }
    energy[static_cast<std::size_t>(i)] = e;
  }
  auto E = [&](long r, long c) {
    r = std::clamp(r, 0L, ch - 1);
    c = std::clamp(c, 0L, cw - 1);
    return energy[static_cast<std::size_t>(r * cw + c)];
  };
  auto block = [&](long r, long c) {  // 2x2 block with top-left (r, c)
    return 1.0 / std::sqrt(E(r, c) + E(r, c + 1) + E(r + 1, c) + E(r + 1, c + 1) + kEps);
  };

  FeatureMap out(static_cast<std::size_t>(ch), static_cast<std::size_t>(cw), kHogChannels, 0.0);
  for (long r = 0; r < ch; ++r) {
    for (long c = 0; c < cw; ++c) {
      const std::array<double, 4> n = {block(r, c), block(r - 1, c), block(r, c - 1), block(r - 1, c - 1)};
      std::array<double, 4> texture{};
      for (int o = 0; o < 18; ++o) {
        const double v = H(r, c, o);
        double sum = 0.0;
        for (int k = 0; k < 4; ++k) {
          const double t = std::min(v * n[k], kTruncate);
          sum += t;
          texture[k] += t;
        }
        out(r, c, o) = 0.5 * sum;
      }
      for (int o = 0; o < 9; ++o) {
        const double v = H(r, c, o) + H(r, c, o + 9);
        double sum = 0.0;
        for (int k = 0; k < 4; ++k) sum += std::min(v * n[k], kTruncate);
        out(r, c, 18 + o) = 0.5 * sum;
      }
      for (int k = 0; k < 4; ++k) out(r, c, 27 + k) = 0.2357 * texture[k];
    }
  }
  return out;
}

}  // namespace msc
