#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "msc/sequence.hpp"

namespace msc {

struct SyntheticSequence {
  std::string name;
  std::vector<Image> frames;
  std::vector<BoundingBox> truth;
  std::vector<double> scale;  // target size relative to frame 1
};

struct SynthOptions {
  std::size_t frames = 100;
  std::size_t width = 320;
  std::size_t height = 320;
  double target = 32.0;  // initial side length, px
  double speed = 2.0;    // px per frame
  double zoom_step = 1.0275;
  std::size_t zoom_every = 4;  // the zoom sequence grows by zoom_step every this many frames
  std::uint64_t seed = 7;
};

// A textured square moving over a static textured background. Four translating
// sequences (different headings) and one zooming sequence.
std::vector<SyntheticSequence> synthetic_suite(const SynthOptions& options = {});

// Renders one frame: object texture of side `size` centred at `center`.
Image render_frame(const SynthOptions& options, std::uint64_t texture_seed, Point2 center, double size);

// OTB layout under root/<name>/: img/0001.png ... and groundtruth_rect.txt (1-indexed).
SequenceSpec write_sequence(const SyntheticSequence& seq, const std::filesystem::path& root);

}  // namespace msc
