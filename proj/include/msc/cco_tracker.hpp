#pragma once

#include <optional>

#include "msc/cco.hpp"
#include "msc/pca.hpp"
#include "msc/tracker.hpp"

namespace msc {

InterpKernel kernel_from_name(const std::string& name);

// MSC-CCO: CRM-selected MSC features compressed by PCA (fitted on the first
// frame), HOG appended, interpolated to the continuous domain and scored by the
// continuous convolution operator on a grid_factor-times denser grid.
class CcoTracker : public Tracker {
 public:
  explicit CcoTracker(TrackerConfig config);

  void init(const Image& frame, const BoundingBox& box) override;
  BoundingBox track_frame(const Image& frame) override;
  BoundingBox box() const override;
  std::string name() const override { return "msc-cco"; }

  ScaleEstimate estimate_scale(const Image& frame) const;
  const ScaleEstimate& last_scale() const { return last_scale_; }

  const TrackerConfig& config() const { return config_; }
  const CcoModel& model() const { return model_; }
  const std::vector<std::size_t>& channels() const { return channels_; }
  std::size_t feature_channels() const { return model_.numerator.channels(); }

  FeatureMap features(const Image& frame, Point2 center, double factor) const;

 private:
  TrackerConfig config_;
  FeatureExtractor extractor_;
  std::optional<FeatureExtractor> hog_;
  std::optional<PcaProjector> pca_;
  TrackGeometry geom_;
  GaussianLabel label_;
  FeatureMap window_;
  std::vector<std::size_t> channels_;
  CcoModel model_;
  ScaleEstimate last_scale_;
  bool initialized_ = false;
};

}  // namespace msc
