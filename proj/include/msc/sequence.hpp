#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "msc/image.hpp"

namespace msc {

// Axis-aligned box, top-left origin, 0-indexed frame coordinates.
struct BoundingBox {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  Point2 center() const { return {x + w / 2.0, y + h / 2.0}; }
  Size2 size() const { return {w, h}; }
  bool valid() const { return w > 0.0 && h > 0.0; }
  static BoundingBox from_center(Point2 c, Size2 s) { return {c.x - s.width / 2.0, c.y - s.height / 2.0, s.width, s.height}; }
};

struct SequenceSpec {
  std::string name;
  std::vector<std::filesystem::path> frames;
  std::vector<BoundingBox> ground_truth;
};

// OTB layout: <dir>/img/* frames (sorted by file name) and <dir>/groundtruth_rect.txt
// with one "x,y,w,h" line per frame (comma, tab or space separated, 1-indexed).
SequenceSpec load_sequence(const std::filesystem::path& dir);

// Parses one ground-truth line; throws with the line number on malformed input.
BoundingBox parse_groundtruth_line(const std::string& line, std::size_t line_number);

}  // namespace msc
