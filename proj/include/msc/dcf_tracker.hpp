#pragma once

#include "msc/tracker.hpp"

namespace msc {

// MSC-DCF: features -> (first frame) CRM channel selection -> Hann window ->
// closed-form multi-channel filter, updated by moving average every frame.
class DcfTracker : public Tracker {
 public:
  explicit DcfTracker(TrackerConfig config);

  void init(const Image& frame, const BoundingBox& box) override;
  BoundingBox track_frame(const Image& frame) override;
  BoundingBox box() const override;
  std::string name() const override { return "msc-dcf"; }

  // Detects at every candidate scale around the current state; does not modify it.
  ScaleEstimate estimate_scale(const Image& frame) const;
  const ScaleEstimate& last_scale() const { return last_scale_; }

  const TrackerConfig& config() const { return config_; }
  const DcfModel& model() const { return model_; }
  const std::vector<std::size_t>& channels() const { return channels_; }
  const GaussianLabel& label() const { return label_; }
  const TrackGeometry& geometry() const { return geom_; }

  // Selected, windowed features at the current centre with crop scale `factor`.
  FeatureMap features(const Image& frame, Point2 center, double factor) const;

 private:
  TrackerConfig config_;
  FeatureExtractor extractor_;
  TrackGeometry geom_;
  GaussianLabel label_;
  FeatureMap window_;
  std::vector<std::size_t> channels_;
  DcfModel model_;
  ScaleEstimate last_scale_;
  bool initialized_ = false;
};

// Shared first-frame CRM selection: every non-deep channel is kept, the deep
// block is ranked and its top-K channels appended in rank order.
std::vector<std::size_t> select_reliable_channels(const FeatureMap& map, std::optional<ChannelRange> deep,
                                                  const CrmConfig& crm, double center_row, double center_col,
                                                  double h_cells, double w_cells);

}  // namespace msc
