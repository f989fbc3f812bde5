#include "msc/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

namespace msc {
namespace {

// FFTW planning is not thread-safe; execution of an existing plan on new
// arrays is. Plans are cached per (H, W, sign) and never destroyed.
class PlanCache {
 public:
  // Single-channel H x W plan, executed per channel on aligned scratch.
  fftw_plan get(std::size_t h, std::size_t w, int sign) {
    const auto key = std::make_tuple(h, w, sign);
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    auto* in = fftw_alloc_complex(h * w);
    auto* out = fftw_alloc_complex(h * w);
    fftw_plan plan = fftw_plan_dft_2d(static_cast<int>(h), static_cast<int>(w), in, out, sign, FFTW_ESTIMATE);
    fftw_free(in);
    fftw_free(out);
    if (plan == nullptr) throw std::runtime_error("fftw planning failed");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<std::size_t, std::size_t, int>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

struct FftwBuffer {
  fftw_complex* data = nullptr;
  std::size_t size = 0;
  ~FftwBuffer() { fftw_free(data); }
  fftw_complex* reserve(std::size_t n) {
    if (n > size) {
      fftw_free(data);
      data = fftw_alloc_complex(n);
      if (data == nullptr) throw std::bad_alloc();
      size = n;
    }
    return data;
  }
};

// Channels are gathered in blocks so each pass over the interleaved tensor
// reads whole cache lines.
constexpr std::size_t kBlock = 8;

template <typename Load, typename Store>
void transform(const Shape& shape, int sign, Load load, Store store) {
  const std::size_t plane = shape.plane(), d = shape.channels;
  fftw_plan plan = plan_cache().get(shape.height, shape.width, sign);
  thread_local FftwBuffer buf_a, buf_b;
  fftw_complex* a = buf_a.reserve(kBlock * plane);
  fftw_complex* b = buf_b.reserve(kBlock * plane);
  for (std::size_t l0 = 0; l0 < d; l0 += kBlock) {
    const std::size_t nb = std::min(kBlock, d - l0);
    for (std::size_t k = 0; k < plane; ++k) {
      for (std::size_t j = 0; j < nb; ++j) {
        const Complex v = load(k * d + l0 + j);
        a[j * plane + k][0] = v.real();
        a[j * plane + k][1] = v.imag();
      }
    }
    for (std::size_t j = 0; j < nb; ++j) fftw_execute_dft(plan, a + j * plane, b + j * plane);
    for (std::size_t k = 0; k < plane; ++k) {
      for (std::size_t j = 0; j < nb; ++j) store(k * d + l0 + j, Complex(b[j * plane + k][0], b[j * plane + k][1]));
    }
  }
}

void require_finite_spectrum(const Spectrum& spec, const char* what) {
  for (std::size_t i = 0; i < spec.size(); ++i) {
    if (!std::isfinite(spec[i].real()) || !std::isfinite(spec[i].imag())) {
      throw std::invalid_argument(std::string(what) + ": non-finite value at flat index " + std::to_string(i));
    }
  }
}

}  // namespace

Spectrum fft2(const FeatureMap& map) {
  if (map.empty()) throw std::invalid_argument("fft2: empty input");
  require_finite(map, "fft2");
  Spectrum out(map.shape());
  transform(map.shape(), FFTW_FORWARD, [&](std::size_t i) { return Complex(map[i], 0.0); },
            [&](std::size_t i, Complex v) { out[i] = v; });
  return out;
}

Spectrum fft2(const Spectrum& spec) {
  if (spec.empty()) throw std::invalid_argument("fft2: empty input");
  require_finite_spectrum(spec, "fft2");
  Spectrum out(spec.shape());
  transform(spec.shape(), FFTW_FORWARD, [&](std::size_t i) { return spec[i]; },
            [&](std::size_t i, Complex v) { out[i] = v; });
  return out;
}

Spectrum ifft2_complex(const Spectrum& spec) {
  if (spec.empty()) throw std::invalid_argument("ifft2: empty input");
  require_finite_spectrum(spec, "ifft2");
  const double scale = 1.0 / static_cast<double>(spec.shape().plane());
  Spectrum out(spec.shape());
  transform(spec.shape(), FFTW_BACKWARD, [&](std::size_t i) { return spec[i]; },
            [&](std::size_t i, Complex v) { out[i] = v * scale; });
  return out;
}

FeatureMap ifft2(const Spectrum& spec) {
  if (spec.empty()) throw std::invalid_argument("ifft2: empty input");
  require_finite_spectrum(spec, "ifft2");
  const double scale = 1.0 / static_cast<double>(spec.shape().plane());
  FeatureMap out(spec.shape());
  transform(spec.shape(), FFTW_BACKWARD, [&](std::size_t i) { return spec[i]; },
            [&](std::size_t i, Complex v) { out[i] = v.real() * scale; });
  return out;
}

double max_imag(const Spectrum& values) {
  double m = 0.0;
  for (const auto& v : values) m = std::max(m, std::abs(v.imag()));
  return m;
}

Spectrum hadamard(const Spectrum& a, const Spectrum& b) {
  require_same_shape(a.shape(), b.shape(), "hadamard");
  Spectrum out(a.shape());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

Spectrum conj(Spectrum a) {
  for (auto& v : a) v = std::conj(v);
  return a;
}

double hermitian_residual(const Spectrum& spec) {
  const std::size_t h = spec.height();
  const std::size_t w = spec.width();
  double scale = 0.0;
  for (const auto& v : spec) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return 0.0;
  double worst = 0.0;
  for (std::size_t u = 0; u < h; ++u) {
    for (std::size_t v = 0; v < w; ++v) {
      const std::size_t um = (h - u) % h;
      const std::size_t vm = (w - v) % w;
      for (std::size_t d = 0; d < spec.channels(); ++d) {
        worst = std::max(worst, std::abs(spec(u, v, d) - std::conj(spec(um, vm, d))));
      }
    }
  }
  return worst / scale;
}

Spectrum conj_dot_channels(const Spectrum& a, const Spectrum& b) {
  require_same_shape(a.shape(), b.shape(), "conj_dot_channels");
  Spectrum out(a.height(), a.width(), 1);
  const std::size_t d = a.channels();
  for (std::size_t i = 0; i < a.shape().plane(); ++i) {
    Complex acc{};
    for (std::size_t l = 0; l < d; ++l) acc += std::conj(a[i * d + l]) * b[i * d + l];
    out[i] = acc;
  }
  return out;
}

}  // namespace msc
