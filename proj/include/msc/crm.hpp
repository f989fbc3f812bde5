#pragma once

#include <vector>

#include "msc/tensor.hpp"

namespace msc {

// Channel reliability: for each channel l of a feature map S_e with target
// sub-region S_t (W_t x H_t cells),
//   R = |S_t|_1 / (|S_e|_1 + zeta)
//   Z = #{cells of S_t with |v| > kNonzeroTolerance}
//   A = 1 if Z > W_t H_t / eta else 0
//   C = R * A
// Channels are ranked by C (descending, ties to the lower index) and the top K kept.

inline constexpr double kNonzeroTolerance = 1e-12;
inline constexpr double kDefaultEta = 3.0;
inline constexpr double kDefaultZeta = 1e-5;
inline constexpr std::size_t kDefaultDcfTopK = 50;
inline constexpr std::size_t kDefaultCcoTopK = 58;

struct TargetRegion {
  std::size_t row = 0;
  std::size_t col = 0;
  std::size_t height = 0;
  std::size_t width = 0;
};

struct ChannelScore {
  std::size_t channel = 0;
  double ratio = 0.0;
  int indicator = 0;
  double score = 0.0;
};

void require_inside(const FeatureMap& map, const TargetRegion& region);

std::vector<double> channel_ratio(const FeatureMap& map, const TargetRegion& region, double zeta = kDefaultZeta);
std::vector<int> activation_indicator(const FeatureMap& map, const TargetRegion& region, double eta = kDefaultEta);
std::vector<ChannelScore> reliability_scores(const FeatureMap& map, const TargetRegion& region, double eta = kDefaultEta,
                                             double zeta = kDefaultZeta);
std::vector<std::size_t> select_top_k(const std::vector<ChannelScore>& scores, std::size_t k);

// Region of a target of (h, w) cells centred on (center_row, center_col), clipped to the map.
TargetRegion centered_region(const FeatureMap& map, double center_row, double center_col, double height_cells,
                             double width_cells);

}  // namespace msc
