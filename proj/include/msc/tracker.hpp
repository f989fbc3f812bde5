#pragma once

#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "msc/crm.hpp"
#include "msc/dcf.hpp"
#include "msc/features.hpp"
#include "msc/sequence.hpp"

namespace msc {

struct CrmConfig {
  bool enabled = true;
  std::size_t k = kDefaultDcfTopK;
  double eta = kDefaultEta;
  double zeta = kDefaultZeta;
};

enum class TrackerKind { Dcf, Cco };

struct TrackerConfig {
  TrackerKind tracker = TrackerKind::Dcf;
  FeatureKind features = FeatureKind::Msc;
  double lambda_d = kDefaultLambdaD;
  double mu = kDefaultDcfLearningRate;
  double padding = 1.65;
  std::size_t scales = 3;
  double scale_step = 1.0275;
  double scale_penalty = 0.9925;
  CrmConfig crm;

  // CCO only.
  std::size_t grid_factor = 4;
  std::size_t bandwidth = 0;  // 0 = full DFT band
  double lambda_c = 1e-4;
  std::string kernel = "bspline";  // "bspline" | "linear" | "ideal"
  std::size_t pca_dims = 38;
  bool with_hog = true;  // append HOG to the MSC stack

  // Feature geometry.
  std::size_t grid = 52;
  std::size_t hog_cell = 4;
  std::size_t msc_input = 224;
  std::string head;
  std::uint64_t seed = 1;

  double sigma_factor = 0.1;  // label sigma = sigma_factor * sqrt(target cells)
  bool window = true;

  static TrackerConfig dcf_defaults();
  static TrackerConfig cco_defaults();

  FeatureOptions feature_options() const;
  void validate() const;
};

// Unknown keys are rejected. Missing keys take the defaults of the tracker type
// named by "tracker" ("dcf" when absent).
TrackerConfig tracker_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const TrackerConfig& config);
std::string to_string(TrackerKind kind);

struct ScaleCandidate {
  double factor = 1.0;
  double peak_value = 0.0;
  double penalized = 0.0;
  double row = 0.0;  // refined peak, coarse cells
  double col = 0.0;
};

struct ScaleEstimate {
  std::size_t index = 0;
  std::vector<ScaleCandidate> candidates;
};

// Factors a^(i - (S-1)/2) for i = 0..S-1.
std::vector<double> scale_factors(std::size_t scales, double step);
// Picks the candidate with the largest penalised peak; ties go to the candidate
// closest to the middle, then to the lower index.
std::size_t pick_scale(const std::vector<ScaleCandidate>& candidates);

class Tracker {
 public:
  virtual ~Tracker() = default;
  virtual void init(const Image& frame, const BoundingBox& box) = 0;
  virtual BoundingBox track_frame(const Image& frame) = 0;
  virtual BoundingBox box() const = 0;
  virtual std::string name() const = 0;
};

std::unique_ptr<Tracker> make_tracker(const TrackerConfig& config);

// Geometry shared by both trackers.
struct TrackGeometry {
  Point2 center;
  Size2 base_size;   // first-frame target size
  double scale = 1.0;
  std::size_t cells = 0;

  Size2 target() const { return {base_size.width * scale, base_size.height * scale}; }
  Size2 crop(double padding, double factor = 1.0) const {
    return {base_size.width * scale * factor * (1.0 + padding), base_size.height * scale * factor * (1.0 + padding)};
  }
};

void require_trackable(const Image& frame, const BoundingBox& box);

}  // namespace msc
