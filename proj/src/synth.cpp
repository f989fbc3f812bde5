#include "msc/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <stdexcept>

namespace msc {
namespace {

constexpr int kBlocks = 4;
constexpr int kSuper = 4;

struct Texture {
  double object[kBlocks][kBlocks][3];
  double bg_freq[6][2];
  double bg_phase[6];
  double bg_color[6][3];
};

Texture make_texture(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Texture t{};
  for (auto& row : t.object)
    for (auto& cell : row)
      for (double& v : cell) v = 0.1 + 0.8 * u(rng);
  for (int k = 0; k < 6; ++k) {
    const double angle = 2.0 * std::numbers::pi * u(rng);
    const double f = 0.01 + 0.04 * u(rng);
    t.bg_freq[k][0] = f * std::cos(angle);
    t.bg_freq[k][1] = f * std::sin(angle);
    t.bg_phase[k] = 2.0 * std::numbers::pi * u(rng);
    for (double& v : t.bg_color[k]) v = 0.04 * (u(rng) - 0.5);
  }
  return t;
}

std::uint8_t to_byte(double v) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

// Static background at pixel centres, 3 channels.
std::vector<double> render_background(const SynthOptions& o, const Texture& t) {
  std::vector<double> bg(o.width * o.height * 3);
  for (std::size_t r = 0; r < o.height; ++r) {
    for (std::size_t c = 0; c < o.width; ++c) {
      const double px = static_cast<double>(c) + 0.5, py = static_cast<double>(r) + 0.5;
      double* v = &bg[(r * o.width + c) * 3];
      for (int k = 0; k < 3; ++k) v[k] = 0.5;
      for (int w = 0; w < 6; ++w) {
        const double s =
            std::sin(2.0 * std::numbers::pi * (t.bg_freq[w][0] * px + t.bg_freq[w][1] * py) + t.bg_phase[w]);
        for (int k = 0; k < 3; ++k) v[k] += t.bg_color[w][k] * s;
      }
    }
  }
  return bg;
}

// Object composited with per-pixel coverage from kSuper x kSuper subsamples.
Image composite(const SynthOptions& o, const Texture& t, const std::vector<double>& bg, Point2 center,
                double size) {
  Image img(o.height, o.width, 3);
  for (std::size_t i = 0; i < bg.size(); ++i) img[i] = to_byte(bg[i]);
  const double x0 = center.x - size / 2.0, y0 = center.y - size / 2.0;
  const long c0 = std::max(0L, static_cast<long>(std::floor(x0)));
  const long c1 = std::min(static_cast<long>(o.width), static_cast<long>(std::ceil(x0 + size)) + 1);
  const long r0 = std::max(0L, static_cast<long>(std::floor(y0)));
  const long r1 = std::min(static_cast<long>(o.height), static_cast<long>(std::ceil(y0 + size)) + 1);
  for (long r = r0; r < r1; ++r) {
    for (long c = c0; c < c1; ++c) {
      const double* b = &bg[(static_cast<std::size_t>(r) * o.width + static_cast<std::size_t>(c)) * 3];
      double acc[3] = {0.0, 0.0, 0.0};
      for (int sy = 0; sy < kSuper; ++sy) {
        for (int sx = 0; sx < kSuper; ++sx) {
          const double u = (static_cast<double>(c) + (sx + 0.5) / kSuper - x0) / size;
          const double v = (static_cast<double>(r) + (sy + 0.5) / kSuper - y0) / size;
          const double* src = b;
          if (u >= 0.0 && u < 1.0 && v >= 0.0 && v < 1.0) {
            src = t.object[static_cast<int>(v * kBlocks)][static_cast<int>(u * kBlocks)];
          }
          for (int k = 0; k < 3; ++k) acc[k] += src[k];
        }
      }
      for (int k = 0; k < 3; ++k) {
        img(static_cast<std::size_t>(r), static_cast<std::size_t>(c), static_cast<std::size_t>(k)) =
            to_byte(acc[k] / (kSuper * kSuper));
      }
    }
  }
  return img;
}

}  // namespace

Image render_frame(const SynthOptions& options, std::uint64_t texture_seed, Point2 center, double size) {
  const Texture t = make_texture(texture_seed);
  return composite(options, t, render_background(options, t), center, size);
}

std::vector<SyntheticSequence> synthetic_suite(const SynthOptions& o) {
  if (o.frames < 2) throw std::invalid_argument("synthetic_suite: need at least 2 frames");
  const double w = static_cast<double>(o.width), h = static_cast<double>(o.height);
  const double travel = o.speed * static_cast<double>(o.frames - 1);
  struct Path {
    const char* name;
    Point2 start;
    double heading;  // degrees
    bool zoom;
  };
  const double margin = o.target;
  const Path paths[] = {
      {"square_right", {margin + 8.0, h / 2.0}, 0.0, false},
      {"square_down", {w / 2.0, margin + 8.0}, 90.0, false},
      {"square_diagonal", {margin + 8.0, margin + 8.0}, 45.0, false},
      {"square_left", {w - margin - 8.0, h / 2.0 + 20.0}, 180.0, false},
      {"square_zoom", {w / 2.0 - travel / 4.0, h / 2.0}, 0.0, true},
  };
  std::vector<SyntheticSequence> out;
  std::uint64_t index = 0;
  for (const Path& p : paths) {
    SyntheticSequence seq;
    seq.name = p.name;
    const double speed = p.zoom ? o.speed / 4.0 : o.speed;
    const double rad = p.heading * std::numbers::pi / 180.0;
    const Texture tex = make_texture(o.seed * 1000 + index);
    const std::vector<double> bg = render_background(o, tex);
    for (std::size_t f = 0; f < o.frames; ++f) {
      const double s = p.zoom ? std::pow(o.zoom_step, static_cast<double>(f / o.zoom_every)) : 1.0;
      const double side = o.target * s;
      const Point2 c{p.start.x + speed * static_cast<double>(f) * std::cos(rad),
                     p.start.y + speed * static_cast<double>(f) * std::sin(rad)};
      seq.frames.push_back(composite(o, tex, bg, c, side));
      seq.truth.push_back(BoundingBox::from_center(c, {side, side}));
      seq.scale.push_back(s);
    }
    out.push_back(std::move(seq));
    ++index;
  }
  return out;
}

SequenceSpec write_sequence(const SyntheticSequence& seq, const std::filesystem::path& root) {
  const auto dir = root / seq.name;
  std::filesystem::create_directories(dir / "img");
  SequenceSpec spec;
  spec.name = seq.name;
  std::ofstream gt(dir / "groundtruth_rect.txt");
  if (!gt) throw std::runtime_error("cannot write " + (dir / "groundtruth_rect.txt").string());
  for (std::size_t i = 0; i < seq.frames.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "%04zu.png", i + 1);
    const auto path = dir / "img" / name;
    save_png(path, seq.frames[i]);
    spec.frames.push_back(path);
    const BoundingBox& b = seq.truth[i];
    char line[128];
    std::snprintf(line, sizeof line, "%.4f,%.4f,%.4f,%.4f\n", b.x + 1.0, b.y + 1.0, b.w, b.h);
    gt << line;
    spec.ground_truth.push_back(b);
  }
  return spec;
}

}  // namespace msc
