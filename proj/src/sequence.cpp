#include "msc/sequence.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace msc {

BoundingBox parse_groundtruth_line(const std::string& line, std::size_t line_number) {
  std::string normalized = line;
  std::replace_if(normalized.begin(), normalized.end(), [](char c) { return c == ',' || c == '\t' || c == '\r'; }, ' ');
  std::istringstream in(normalized);
  std::vector<double> fields;
  std::string token;
  while (in >> token) {
    try {
      std::size_t used = 0;
      fields.push_back(std::stod(token, &used));
      if (used != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      throw std::runtime_error("groundtruth line " + std::to_string(line_number) + ": cannot parse '" + token + "'");
    }
  }
  if (fields.size() != 4) {
    throw std::runtime_error("groundtruth line " + std::to_string(line_number) + ": expected 4 fields, got " +
                             std::to_string(fields.size()));
  }
  // OTB boxes are 1-indexed.
  return BoundingBox{fields[0] - 1.0, fields[1] - 1.0, fields[2], fields[3]};
}

SequenceSpec load_sequence(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  const fs::path img_dir = dir / "img";
  const fs::path gt_path = dir / "groundtruth_rect.txt";
  if (!fs::is_directory(img_dir)) throw std::runtime_error(dir.string() + ": missing img/ directory");
  std::ifstream gt(gt_path);
  if (!gt) throw std::runtime_error(dir.string() + ": missing groundtruth_rect.txt");

  SequenceSpec spec;
  spec.name = dir.filename().string();
  if (spec.name.empty()) spec.name = dir.parent_path().filename().string();
  for (const auto& entry : fs::directory_iterator(img_dir)) {
    if (entry.is_regular_file()) spec.frames.push_back(entry.path());
  }
  std::sort(spec.frames.begin(), spec.frames.end());

  std::string line;
  std::size_t number = 0;
  while (std::getline(gt, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    spec.ground_truth.push_back(parse_groundtruth_line(line, number));
  }
  if (spec.ground_truth.size() != spec.frames.size()) {
    throw std::runtime_error(dir.string() + ": " + std::to_string(spec.frames.size()) + " frames but " +
                             std::to_string(spec.ground_truth.size()) + " ground-truth boxes");
  }
  if (spec.frames.empty() || !spec.ground_truth.front().valid()) {
    throw std::runtime_error(dir.string() + ": first ground-truth box is missing or degenerate");
  }
  return spec;
}

}  // namespace msc
