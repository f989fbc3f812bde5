#include "msc/tensor.hpp"

#include <algorithm>
#include <cmath>

namespace msc {

std::string to_string(const Shape& s) {
  return std::to_string(s.height) + "x" + std::to_string(s.width) + "x" + std::to_string(s.channels);
}

void require_same_shape(const Shape& a, const Shape& b, const char* what) {
  if (!(a == b)) {
    throw std::invalid_argument(std::string(what) + ": shape mismatch " + to_string(a) + " vs " +
                                to_string(b));
  }
}

void require_finite(const FeatureMap& map, const char* what) {
  for (std::size_t i = 0; i < map.size(); ++i) {
    if (!std::isfinite(map[i])) {
      throw std::invalid_argument(std::string(what) + ": non-finite value at flat index " +
                                  std::to_string(i));
    }
  }
}

template <typename T>
static Tensor3<T> channel_impl(const Tensor3<T>& map, std::size_t d) {
  if (d >= map.channels()) throw std::out_of_range("channel index out of range");
  Tensor3<T> out(map.height(), map.width(), 1);
  for (std::size_t i = 0; i < map.shape().plane(); ++i) out[i] = map[i * map.channels() + d];
  return out;
}

FeatureMap channel(const FeatureMap& map, std::size_t d) { return channel_impl(map, d); }
Spectrum channel(const Spectrum& spec, std::size_t d) { return channel_impl(spec, d); }

FeatureMap select_channels(const FeatureMap& map, std::span<const std::size_t> indices) {
  if (indices.empty()) throw std::invalid_argument("select_channels: empty index set");
  FeatureMap out(map.height(), map.width(), indices.size());
  const std::size_t d_in = map.channels();
  for (std::size_t k = 0; k < indices.size(); ++k) {
    if (indices[k] >= d_in) throw std::out_of_range("select_channels: channel index out of range");
  }
  for (std::size_t i = 0; i < map.shape().plane(); ++i) {
    for (std::size_t k = 0; k < indices.size(); ++k) {
      out[i * indices.size() + k] = map[i * d_in + indices[k]];
    }
  }
  return out;
}

FeatureMap concat_channels(const FeatureMap& first, const FeatureMap& second) {
  if (first.height() != second.height() || first.width() != second.width()) {
    throw std::invalid_argument("concat_channels: spatial mismatch " + to_string(first.shape()) +
                                " vs " + to_string(second.shape()));
  }
  const std::size_t da = first.channels();
  const std::size_t db = second.channels();
  FeatureMap out(first.height(), first.width(), da + db);
  for (std::size_t i = 0; i < first.shape().plane(); ++i) {
    std::copy_n(first.data() + i * da, da, out.data() + i * (da + db));
    std::copy_n(second.data() + i * db, db, out.data() + i * (da + db) + da);
  }
  return out;
}

FeatureMap circshift(const FeatureMap& map, long dr, long dc) {
  const long h = static_cast<long>(map.height());
  const long w = static_cast<long>(map.width());
  FeatureMap out(map.shape());
  for (long r = 0; r < h; ++r) {
    const long rr = ((r + dr) % h + h) % h;
    for (long c = 0; c < w; ++c) {
      const long cc = ((c + dc) % w + w) % w;
      for (std::size_t d = 0; d < map.channels(); ++d) out(rr, cc, d) = map(r, c, d);
    }
  }
  return out;
}

FeatureMap scaled(FeatureMap map, double factor) {
  for (auto& v : map) v *= factor;
  return map;
}

double sum_squares(const FeatureMap& map) {
  double s = 0.0;
  for (double v : map) s += v * v;
  return s;
}

double max_abs_difference(const FeatureMap& a, const FeatureMap& b) {
  require_same_shape(a.shape(), b.shape(), "max_abs_difference");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double max_abs(const FeatureMap& map) {
  double m = 0.0;
  for (double v : map) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace msc
