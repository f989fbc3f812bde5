#include "msc/features.hpp"

#include <stdexcept>

#include "msc/hog.hpp"

namespace msc {

FeatureKind parse_feature_kind(std::string_view name) {
  if (name == "raw") return FeatureKind::Raw;
  if (name == "hog") return FeatureKind::Hog;
  if (name == "hog+raw") return FeatureKind::HogRaw;
  if (name == "msc") return FeatureKind::Msc;
  throw std::invalid_argument("unknown feature kind '" + std::string(name) + "'");
}

std::string to_string(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::Raw: return "raw";
    case FeatureKind::Hog: return "hog";
    case FeatureKind::HogRaw: return "hog+raw";
    case FeatureKind::Msc: return "msc";
  }
  return "?";
}

FeatureExtractor::FeatureExtractor(FeatureOptions options) : options_(std::move(options)) {
  if (options_.hog_cell == 0) throw std::invalid_argument("FeatureExtractor: hog_cell must be positive");
  if (options_.kind == FeatureKind::Msc) {
    backbone_.emplace(options_.msc_input);
    grid_ = backbone_->fused_size();
    if (options_.head.empty()) {
      head_ = CompressionHead::random(ProxyBackbone::kShallowChannels, ProxyBackbone::kDeepChannels, options_.seed);
    } else {
      head_ = load_head(options_.head);
      if (head_->shallow.weights.height() != ProxyBackbone::kShallowChannels ||
          head_->deep.weights.height() != ProxyBackbone::kDeepChannels) {
        throw std::invalid_argument("FeatureExtractor: head checkpoint input channels do not match the backbone");
      }
    }
  } else {
    if (options_.grid < 2) throw std::invalid_argument("FeatureExtractor: grid must be at least 2");
    grid_ = options_.grid;
  }
}

std::size_t FeatureExtractor::channels() const {
  switch (options_.kind) {
    case FeatureKind::Raw: return 1;
    case FeatureKind::Hog: return kHogChannels;
    case FeatureKind::HogRaw: return kHogChannels + 1;
    case FeatureKind::Msc: return kMscChannels;
  }
  return 0;
}

std::optional<ChannelRange> FeatureExtractor::deep_block() const {
  if (options_.kind != FeatureKind::Msc) return std::nullopt;
  return ChannelRange{kShallowOut, kMscChannels};
}

FeatureMap FeatureExtractor::operator()(const Image& frame, Point2 center, Size2 crop) const {
  switch (options_.kind) {
    case FeatureKind::Raw: return raw(frame, center, crop);
    case FeatureKind::Hog: return hog_features(frame, center, crop);
    case FeatureKind::HogRaw: return concat_channels(hog_features(frame, center, crop), raw(frame, center, crop));
    case FeatureKind::Msc: return msc(frame, center, crop);
  }
  throw std::logic_error("FeatureExtractor: bad kind");
}

FeatureMap FeatureExtractor::raw(const Image& frame, Point2 center, Size2 crop) const {
  FeatureMap px = extract_crop(frame, center, crop, grid_, grid_).pixels;
  FeatureMap gray = px.channels() == 3 ? to_gray(px) : std::move(px);
  double mean = 0.0;
  for (double v : gray) mean += v;
  mean /= static_cast<double>(gray.size());
  for (double& v : gray) v -= mean;
  return gray;
}

FeatureMap FeatureExtractor::hog_features(const Image& frame, Point2 center, Size2 crop) const {
  const std::size_t side = grid_ * options_.hog_cell;
  return hog(extract_crop(frame, center, crop, side, side).pixels, options_.hog_cell);
}

FeatureMap FeatureExtractor::msc(const Image& frame, Point2 center, Size2 crop) const {
  const std::size_t side = backbone_->input_size();
  const BackboneMaps maps = (*backbone_)(extract_crop(frame, center, crop, side, side).pixels);
  return msc_features(maps.shallow, maps.deep, *head_);
}

}  // namespace msc
