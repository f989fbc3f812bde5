#include "msc/cco_tracker.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "msc/dcf_tracker.hpp"

namespace msc {

InterpKernel kernel_from_name(const std::string& name) {
  if (name == "bspline") return InterpKernel::cubic_bspline();
  if (name == "linear") return InterpKernel::linear();
  if (name == "ideal") return InterpKernel::ideal();
  throw std::invalid_argument("unknown interpolation kernel '" + name + "'");
}

namespace {

Bandwidth band_of(std::size_t b) { return Bandwidth{b, b}; }

// Scales a feature block to unit mean energy per cell so that blocks of
// different origin enter the filter with equal weight.
FeatureMap normalize_block(FeatureMap f) {
  const double e = sum_squares(f) / static_cast<double>(f.shape().plane());
  return e > 0.0 ? scaled(std::move(f), 1.0 / std::sqrt(e)) : f;
}

}  // namespace

CcoTracker::CcoTracker(TrackerConfig config)
    : config_(std::move(config)), extractor_((config_.validate(), config_.feature_options())) {
  if (config_.features == FeatureKind::Msc && config_.with_hog) {
    FeatureOptions o = config_.feature_options();
    o.kind = FeatureKind::Hog;
    o.grid = extractor_.grid();
    hog_.emplace(o);
  }
}

FeatureMap CcoTracker::features(const Image& frame, Point2 center, double factor) const {
  const Size2 crop = geom_.crop(config_.padding, factor);
  FeatureMap f = select_channels(extractor_(frame, center, crop), channels_);
  if (pca_) f = pca_project(*pca_, f);
  if (hog_) f = concat_channels(normalize_block(std::move(f)), normalize_block((*hog_)(frame, center, crop)));
  return config_.window ? apply_window(f, window_) : f;
}

void CcoTracker::init(const Image& frame, const BoundingBox& box) {
  require_trackable(frame, box);
  geom_ = TrackGeometry{box.center(), box.size(), 1.0, extractor_.grid()};
  const std::size_t n = geom_.cells;
  const double target_cells = static_cast<double>(n) / (1.0 + config_.padding);
  const double c = std::floor(static_cast<double>(n) / 2.0);
  label_ = gaussian_label(n, n, c, c, config_.sigma_factor * target_cells);
  window_ = hann_window(n, n);

  const FeatureMap full = extractor_(frame, geom_.center, geom_.crop(config_.padding));
  channels_ = select_reliable_channels(full, extractor_.deep_block(), config_.crm, c, c, target_cells, target_cells);
  pca_.reset();
  if (config_.features == FeatureKind::Msc && channels_.size() > config_.pca_dims) {
    pca_ = pca_fit(select_channels(full, channels_), config_.pca_dims);
  }
  const FeatureMap f = features(frame, geom_.center, 1.0);
  const InterpKernel kernel = kernel_from_name(config_.kernel);
  model_ = train_cco_model(interpolated_spectrum(f, kernel), label_, config_.lambda_c, band_of(config_.bandwidth),
                           kernel);
  initialized_ = true;
}

ScaleEstimate CcoTracker::estimate_scale(const Image& frame) const {
  if (!initialized_) throw std::logic_error("CcoTracker: track before init");
  const CcoFilter filter = model_.filter();
  ScaleEstimate est;
  const auto factors = scale_factors(config_.scales, config_.scale_step);
  const double mid = static_cast<double>(factors.size() - 1) / 2.0;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const FeatureMap conf = confidence_map(filter, features(frame, geom_.center, factors[i]), config_.grid_factor);
    const SubpixelPeak peak = localize_subpixel(conf, config_.grid_factor);
    ScaleCandidate cand;
    cand.factor = factors[i];
    cand.peak_value = peak.value;
    cand.penalized = peak.value * std::pow(config_.scale_penalty, std::abs(static_cast<double>(i) - mid));
    cand.row = peak.row;
    cand.col = peak.col;
    est.candidates.push_back(cand);
  }
  est.index = pick_scale(est.candidates);
  return est;
}

BoundingBox CcoTracker::track_frame(const Image& frame) {
  last_scale_ = estimate_scale(frame);
  const ScaleCandidate& best = last_scale_.candidates[last_scale_.index];
  const std::size_t n = geom_.cells;
  const Size2 crop = geom_.crop(config_.padding, best.factor);
  const double dy = wrapped_offset(best.row, label_.center_row, n) * crop.height / static_cast<double>(n);
  const double dx = wrapped_offset(best.col, label_.center_col, n) * crop.width / static_cast<double>(n);
  geom_.center.x = std::clamp(geom_.center.x + dx, 0.0, static_cast<double>(frame.width()));
  geom_.center.y = std::clamp(geom_.center.y + dy, 0.0, static_cast<double>(frame.height()));
  geom_.scale = std::clamp(geom_.scale * best.factor, 0.1, 10.0);
  const FeatureMap f = features(frame, geom_.center, 1.0);
  model_ = update_cco_model(model_, interpolated_spectrum(f, model_.kernel), label_, config_.mu);
  return box();
}

BoundingBox CcoTracker::box() const { return BoundingBox::from_center(geom_.center, geom_.target()); }

}  // namespace msc
