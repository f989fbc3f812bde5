#include "msc/crm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace msc {

void require_inside(const FeatureMap& map, const TargetRegion& region) {
  if (region.height == 0 || region.width == 0 || region.row + region.height > map.height() ||
      region.col + region.width > map.width()) {
    throw std::invalid_argument("CRM: target region (" + std::to_string(region.row) + "," + std::to_string(region.col) +
                                ") " + std::to_string(region.height) + "x" + std::to_string(region.width) +
                                " is not inside map " + to_string(map.shape()));
  }
}

std::vector<double> channel_ratio(const FeatureMap& map, const TargetRegion& region, double zeta) {
  require_inside(map, region);
  if (!(zeta > 0.0)) throw std::invalid_argument("channel_ratio: zeta must be positive");
  const std::size_t d = map.channels();
  std::vector<double> total(d, 0.0), target(d, 0.0);
  for (std::size_t r = 0; r < map.height(); ++r) {
    const bool row_in = r >= region.row && r < region.row + region.height;
    for (std::size_t c = 0; c < map.width(); ++c) {
      const bool in = row_in && c >= region.col && c < region.col + region.width;
      const double* v = &map(r, c, 0);
      for (std::size_t l = 0; l < d; ++l) {
        const double a = std::abs(v[l]);
        total[l] += a;
        if (in) target[l] += a;
      }
    }
  }
  std::vector<double> ratio(d);
  for (std::size_t l = 0; l < d; ++l) ratio[l] = target[l] / (total[l] + zeta);
  return ratio;
}

std::vector<int> activation_indicator(const FeatureMap& map, const TargetRegion& region, double eta) {
  require_inside(map, region);
  if (!(eta > 0.0)) throw std::invalid_argument("activation_indicator: eta must be positive");
  const std::size_t d = map.channels();
  std::vector<std::size_t> nonzero(d, 0);
  for (std::size_t r = region.row; r < region.row + region.height; ++r) {
    for (std::size_t c = region.col; c < region.col + region.width; ++c) {
      const double* v = &map(r, c, 0);
      for (std::size_t l = 0; l < d; ++l) nonzero[l] += std::abs(v[l]) > kNonzeroTolerance ? 1 : 0;
    }
  }
  const double threshold = static_cast<double>(region.width * region.height) / eta;
  std::vector<int> a(d);
  for (std::size_t l = 0; l < d; ++l) a[l] = static_cast<double>(nonzero[l]) > threshold ? 1 : 0;
  return a;
}

std::vector<ChannelScore> reliability_scores(const FeatureMap& map, const TargetRegion& region, double eta,
                                             double zeta) {
  const auto ratio = channel_ratio(map, region, zeta);
  const auto ind = activation_indicator(map, region, eta);
  std::vector<ChannelScore> out(map.channels());
  for (std::size_t l = 0; l < out.size(); ++l) out[l] = ChannelScore{l, ratio[l], ind[l], ratio[l] * ind[l]};
  return out;
}

std::vector<std::size_t> select_top_k(const std::vector<ChannelScore>& scores, std::size_t k) {
  if (k == 0 || k > scores.size()) {
    throw std::invalid_argument("select_top_k: K=" + std::to_string(k) + " outside [1, " +
                                std::to_string(scores.size()) + "]");
  }
  std::vector<ChannelScore> sorted = scores;
  std::stable_sort(sorted.begin(), sorted.end(), [](const ChannelScore& a, const ChannelScore& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.channel < b.channel;
  });
  std::vector<std::size_t> out(k);
  for (std::size_t i = 0; i < k; ++i) out[i] = sorted[i].channel;
  return out;
}

TargetRegion centered_region(const FeatureMap& map, double center_row, double center_col, double height_cells,
                             double width_cells) {
  auto span = [](double center, double extent, std::size_t limit, std::size_t& start, std::size_t& len) {
    const long n = std::max(1L, std::lround(extent));
    long s = std::lround(center - static_cast<double>(n) / 2.0);
    long e = s + n;
    s = std::clamp(s, 0L, static_cast<long>(limit) - 1);
    e = std::clamp(e, s + 1, static_cast<long>(limit));
    start = static_cast<std::size_t>(s);
    len = static_cast<std::size_t>(e - s);
  };
  TargetRegion region;
  span(center_row, height_cells, map.height(), region.row, region.height);
  span(center_col, width_cells, map.width(), region.col, region.width);
  return region;
}

}  // namespace msc
