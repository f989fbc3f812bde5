#include "msc/dcf_tracker.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace msc {

std::vector<std::size_t> select_reliable_channels(const FeatureMap& map, std::optional<ChannelRange> deep,
                                                  const CrmConfig& crm, double center_row, double center_col,
                                                  double h_cells, double w_cells) {
  std::vector<std::size_t> out;
  if (!crm.enabled || !deep) {
    out.resize(map.channels());
    std::iota(out.begin(), out.end(), 0);
    return out;
  }
  for (std::size_t l = 0; l < map.channels(); ++l) {
    if (l < deep->begin || l >= deep->end) out.push_back(l);
  }
  std::vector<std::size_t> deep_idx(deep->size());
  std::iota(deep_idx.begin(), deep_idx.end(), deep->begin);
  const FeatureMap block = select_channels(map, deep_idx);
  const TargetRegion region = centered_region(block, center_row, center_col, h_cells, w_cells);
  for (std::size_t i : select_top_k(reliability_scores(block, region, crm.eta, crm.zeta), crm.k)) {
    out.push_back(deep->begin + i);
  }
  return out;
}

DcfTracker::DcfTracker(TrackerConfig config)
    : config_(std::move(config)), extractor_((config_.validate(), config_.feature_options())) {}

FeatureMap DcfTracker::features(const Image& frame, Point2 center, double factor) const {
  FeatureMap f = select_channels(extractor_(frame, center, geom_.crop(config_.padding, factor)), channels_);
  return config_.window ? apply_window(f, window_) : f;
}

void DcfTracker::init(const Image& frame, const BoundingBox& box) {
  require_trackable(frame, box);
  geom_ = TrackGeometry{box.center(), box.size(), 1.0, extractor_.grid()};
  const std::size_t n = geom_.cells;
  const double target_cells = static_cast<double>(n) / (1.0 + config_.padding);
  const double c = std::floor(static_cast<double>(n) / 2.0);
  label_ = gaussian_label(n, n, c, c, config_.sigma_factor * target_cells);
  window_ = hann_window(n, n);

  const FeatureMap full = extractor_(frame, geom_.center, geom_.crop(config_.padding));
  channels_ = select_reliable_channels(full, extractor_.deep_block(), config_.crm, c, c, target_cells, target_cells);
  FeatureMap f = select_channels(full, channels_);
  if (config_.window) f = apply_window(f, window_);
  model_ = train_filter(f, label_, config_.lambda_d);
  initialized_ = true;
}

ScaleEstimate DcfTracker::estimate_scale(const Image& frame) const {
  if (!initialized_) throw std::logic_error("DcfTracker: track before init");
  ScaleEstimate est;
  const auto factors = scale_factors(config_.scales, config_.scale_step);
  const double mid = static_cast<double>(factors.size() - 1) / 2.0;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const Detection det = detect(model_, features(frame, geom_.center, factors[i]));
    ScaleCandidate cand;
    cand.factor = factors[i];
    cand.peak_value = det.peak.value;
    cand.penalized = det.peak.value * std::pow(config_.scale_penalty, std::abs(static_cast<double>(i) - mid));
    cand.row = det.peak.sub_row;
    cand.col = det.peak.sub_col;
    est.candidates.push_back(cand);
  }
  est.index = pick_scale(est.candidates);
  return est;
}

BoundingBox DcfTracker::track_frame(const Image& frame) {
  last_scale_ = estimate_scale(frame);
  const ScaleCandidate& best = last_scale_.candidates[last_scale_.index];
  const std::size_t n = geom_.cells;
  const Size2 crop = geom_.crop(config_.padding, best.factor);
  const double dy = wrapped_offset(best.row, label_.center_row, n) * crop.height / static_cast<double>(n);
  const double dx = wrapped_offset(best.col, label_.center_col, n) * crop.width / static_cast<double>(n);
  geom_.center.x = std::clamp(geom_.center.x + dx, 0.0, static_cast<double>(frame.width()));
  geom_.center.y = std::clamp(geom_.center.y + dy, 0.0, static_cast<double>(frame.height()));
  geom_.scale = std::clamp(geom_.scale * best.factor, 0.1, 10.0);
  model_ = update_model(model_, features(frame, geom_.center, 1.0), label_, config_.mu);
  return box();
}

BoundingBox DcfTracker::box() const { return BoundingBox::from_center(geom_.center, geom_.target()); }

}  // namespace msc
