#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "msc/backbone.hpp"
#include "msc/image.hpp"
#include "msc/msc_head.hpp"

namespace msc {

enum class FeatureKind { Raw, Hog, HogRaw, Msc };

FeatureKind parse_feature_kind(std::string_view name);  // "raw" | "hog" | "hog+raw" | "msc"
std::string to_string(FeatureKind kind);

struct FeatureOptions {
  FeatureKind kind = FeatureKind::Msc;
  std::size_t grid = 52;        // output cells per side for raw/hog; MSC derives it from msc_input
  std::size_t hog_cell = 4;
  std::size_t msc_input = 224;  // proxy backbone input side
  std::string head;             // checkpoint stem; empty means a seeded random head
  std::uint64_t seed = 1;
};

struct ChannelRange {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t size() const { return end - begin; }
};

// Square feature grid computed from a crop of the frame. raw: mean-removed gray
// level sampled at the grid; hog: 32-channel HOG of a (grid * hog_cell) patch;
// msc: proxy backbone + compression head.
class FeatureExtractor {
 public:
  explicit FeatureExtractor(FeatureOptions options);

  const FeatureOptions& options() const { return options_; }
  std::size_t grid() const { return grid_; }
  std::size_t channels() const;
  // Channels produced by the deep branch (MSC only).
  std::optional<ChannelRange> deep_block() const;

  FeatureMap operator()(const Image& frame, Point2 center, Size2 crop) const;

 private:
  FeatureMap raw(const Image& frame, Point2 center, Size2 crop) const;
  FeatureMap hog_features(const Image& frame, Point2 center, Size2 crop) const;
  FeatureMap msc(const Image& frame, Point2 center, Size2 crop) const;

  FeatureOptions options_;
  std::size_t grid_ = 0;
  std::optional<ProxyBackbone> backbone_;
  std::optional<CompressionHead> head_;
};

}  // namespace msc
