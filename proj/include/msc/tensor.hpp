#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace msc {

struct Shape {
  std::size_t height = 0;
  std::size_t width = 0;
  std::size_t channels = 0;

  std::size_t size() const { return height * width * channels; }
  std::size_t plane() const { return height * width; }
  bool operator==(const Shape&) const = default;
};

std::string to_string(const Shape& s);

// Dense H x W x D tensor, row-major, channel-last: index (r * W + c) * D + d.
template <typename T>
class Tensor3 {
 public:
  using value_type = T;

  Tensor3() = default;

  Tensor3(std::size_t height, std::size_t width, std::size_t channels, T fill = T{})
      : shape_{height, width, channels} {
    if (height == 0 || width == 0 || channels == 0) {
      throw std::invalid_argument("tensor dimensions must be positive, got " + to_string(shape_));
    }
    values_.assign(shape_.size(), fill);
  }

  explicit Tensor3(Shape shape, T fill = T{}) : Tensor3(shape.height, shape.width, shape.channels, fill) {}

  Tensor3(Shape shape, std::vector<T> values) : Tensor3(shape) {
    if (values.size() != shape_.size()) {
      throw std::invalid_argument("value count " + std::to_string(values.size()) +
                                  " does not match shape " + to_string(shape_));
    }
    values_ = std::move(values);
  }

  std::size_t height() const { return shape_.height; }
  std::size_t width() const { return shape_.width; }
  std::size_t channels() const { return shape_.channels; }
  const Shape& shape() const { return shape_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  std::size_t index(std::size_t r, std::size_t c, std::size_t d) const {
    return (r * shape_.width + c) * shape_.channels + d;
  }

  T& operator()(std::size_t r, std::size_t c, std::size_t d = 0) { return values_[index(r, c, d)]; }
  const T& operator()(std::size_t r, std::size_t c, std::size_t d = 0) const {
    return values_[index(r, c, d)];
  }
  T& operator[](std::size_t i) { return values_[i]; }
  const T& operator[](std::size_t i) const { return values_[i]; }

  std::span<T> values() { return values_; }
  std::span<const T> values() const { return values_; }
  T* data() { return values_.data(); }
  const T* data() const { return values_.data(); }

  auto begin() { return values_.begin(); }
  auto end() { return values_.end(); }
  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }

 private:
  Shape shape_{};
  std::vector<T> values_;
};

using FeatureMap = Tensor3<double>;
using Complex = std::complex<double>;
using Spectrum = Tensor3<Complex>;

void require_same_shape(const Shape& a, const Shape& b, const char* what);
void require_finite(const FeatureMap& map, const char* what);

FeatureMap channel(const FeatureMap& map, std::size_t d);
Spectrum channel(const Spectrum& spec, std::size_t d);
FeatureMap select_channels(const FeatureMap& map, std::span<const std::size_t> indices);
FeatureMap concat_channels(const FeatureMap& first, const FeatureMap& second);

// Circular shift: out[(r + dr) mod H, (c + dc) mod W] = in[r, c].
FeatureMap circshift(const FeatureMap& map, long dr, long dc);

FeatureMap scaled(FeatureMap map, double factor);
double sum_squares(const FeatureMap& map);
double max_abs_difference(const FeatureMap& a, const FeatureMap& b);
double max_abs(const FeatureMap& map);

}  // namespace msc
