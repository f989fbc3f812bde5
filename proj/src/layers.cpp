#include "msc/layers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace msc {

FeatureMap max_pool(const FeatureMap& map, std::size_t kernel, std::size_t stride) {
  if (kernel == 0 || stride == 0) throw std::invalid_argument("max_pool: kernel and stride must be positive");
  if (map.height() < kernel || map.width() < kernel) {
    throw std::invalid_argument("max_pool: input " + to_string(map.shape()) + " smaller than kernel " +
                                std::to_string(kernel));
  }
  const std::size_t oh = (map.height() - kernel) / stride + 1;
  const std::size_t ow = (map.width() - kernel) / stride + 1;
  const std::size_t d = map.channels();
  FeatureMap out(oh, ow, d, -std::numeric_limits<double>::infinity());
  for (std::size_t r = 0; r < oh; ++r) {
    for (std::size_t c = 0; c < ow; ++c) {
      double* dst = &out(r, c, 0);
      for (std::size_t i = 0; i < kernel; ++i) {
        for (std::size_t j = 0; j < kernel; ++j) {
          const double* src = &map(r * stride + i, c * stride + j, 0);
          for (std::size_t l = 0; l < d; ++l) dst[l] = std::max(dst[l], src[l]);
        }
      }
    }
  }
  return out;
}

FeatureMap upsample(const FeatureMap& map, std::size_t factor) {
  if (factor == 0) throw std::invalid_argument("upsample: factor must be >= 1");
  if (factor == 1) return map;
  const std::size_t h = map.height(), w = map.width(), d = map.channels();
  FeatureMap out(h * factor, w * factor, d);
  const double f = static_cast<double>(factor);
  auto taps = [f](std::size_t i, std::size_t n, std::size_t& i0, std::size_t& i1, double& t) {
    const double s = std::clamp((static_cast<double>(i) + 0.5) / f - 0.5, 0.0, static_cast<double>(n - 1));
    i0 = static_cast<std::size_t>(std::floor(s));
    i1 = std::min(i0 + 1, n - 1);
    t = s - static_cast<double>(i0);
  };
  for (std::size_t r = 0; r < out.height(); ++r) {
    std::size_t r0, r1;
    double tr;
    taps(r, h, r0, r1, tr);
    for (std::size_t c = 0; c < out.width(); ++c) {
      std::size_t c0, c1;
      double tc;
      taps(c, w, c0, c1, tc);
      for (std::size_t l = 0; l < d; ++l) {
        const double top = (1 - tc) * map(r0, c0, l) + tc * map(r0, c1, l);
        const double bot = (1 - tc) * map(r1, c0, l) + tc * map(r1, c1, l);
        out(r, c, l) = (1 - tr) * top + tr * bot;
      }
    }
  }
  return out;
}

namespace {

void check_layer(const Conv1x1& layer) {
  if (layer.weights.channels() != 1 || layer.bias.size() != layer.outputs()) {
    throw std::invalid_argument("conv1x1: malformed layer (weights " + to_string(layer.weights.shape()) +
                                ", " + std::to_string(layer.bias.size()) + " biases)");
  }
}

}  // namespace

FeatureMap conv1x1(const FeatureMap& map, const Conv1x1& layer) {
  check_layer(layer);
  if (map.channels() != layer.inputs()) {
    throw std::invalid_argument("conv1x1: map has " + std::to_string(map.channels()) +
                                " channels, weights expect " + std::to_string(layer.inputs()));
  }
  const std::size_t ci = layer.inputs(), co = layer.outputs();
  FeatureMap out(map.height(), map.width(), co);
  for (std::size_t p = 0; p < map.shape().plane(); ++p) {
    const double* x = map.data() + p * ci;
    double* y = out.data() + p * co;
    std::copy(layer.bias.begin(), layer.bias.end(), y);
    for (std::size_t i = 0; i < ci; ++i) {
      const double xi = x[i];
      if (xi == 0.0) continue;
      const double* wrow = layer.weights.data() + i * co;
      for (std::size_t o = 0; o < co; ++o) y[o] += xi * wrow[o];
    }
  }
  return out;
}

Conv1x1Grad conv1x1_backward(const FeatureMap& input, const Conv1x1& layer, const FeatureMap& upstream) {
  check_layer(layer);
  const std::size_t ci = layer.inputs(), co = layer.outputs();
  if (input.channels() != ci || upstream.channels() != co || input.height() != upstream.height() ||
      input.width() != upstream.width()) {
    throw std::invalid_argument("conv1x1_backward: shape mismatch");
  }
  Conv1x1Grad grad{FeatureMap(ci, co, 1, 0.0), std::vector<double>(co, 0.0)};
  for (std::size_t p = 0; p < input.shape().plane(); ++p) {
    const double* x = input.data() + p * ci;
    const double* g = upstream.data() + p * co;
    for (std::size_t o = 0; o < co; ++o) grad.bias[o] += g[o];
    for (std::size_t i = 0; i < ci; ++i) {
      const double xi = x[i];
      if (xi == 0.0) continue;
      double* wrow = grad.weights.data() + i * co;
      for (std::size_t o = 0; o < co; ++o) wrow[o] += xi * g[o];
    }
  }
  return grad;
}

FeatureMap conv1x1_backward_input(const Conv1x1& layer, const FeatureMap& upstream) {
  check_layer(layer);
  const std::size_t ci = layer.inputs(), co = layer.outputs();
  if (upstream.channels() != co) throw std::invalid_argument("conv1x1_backward_input: channel mismatch");
  FeatureMap out(upstream.height(), upstream.width(), ci, 0.0);
  for (std::size_t p = 0; p < upstream.shape().plane(); ++p) {
    const double* g = upstream.data() + p * co;
    double* dx = out.data() + p * ci;
    for (std::size_t i = 0; i < ci; ++i) {
      const double* wrow = layer.weights.data() + i * co;
      double acc = 0.0;
      for (std::size_t o = 0; o < co; ++o) acc += wrow[o] * g[o];
      dx[i] = acc;
    }
  }
  return out;
}

namespace {

void check_lrn(const LrnParams& p) {
  if (p.size == 0 || !(p.kappa > 0.0) || !(p.alpha >= 0.0) || !(p.beta >= 0.0)) {
    throw std::invalid_argument("lrn: invalid parameters");
  }
}

// s_c = kappa + (alpha/n) * sum of squares over the channel neighbourhood.
std::vector<double> lrn_scales(const double* v, std::size_t d, const LrnParams& p) {
  const long half = static_cast<long>(p.size / 2);
  const double coef = p.alpha / static_cast<double>(p.size);
  std::vector<double> s(d);
  for (long c = 0; c < static_cast<long>(d); ++c) {
    double acc = 0.0;
    for (long j = std::max(0L, c - half); j <= std::min(static_cast<long>(d) - 1, c + half); ++j) acc += v[j] * v[j];
    s[static_cast<std::size_t>(c)] = p.kappa + coef * acc;
  }
  return s;
}

double inv_pow(double s, double beta) {
  if (beta == 0.75) {
    const double r = std::sqrt(s);
    return 1.0 / (r * std::sqrt(r));
  }
  return std::pow(s, -beta);
}

}  // namespace

FeatureMap lrn(const FeatureMap& map, const LrnParams& params) {
  check_lrn(params);
  FeatureMap out(map.shape());
  const std::size_t d = map.channels();
  for (std::size_t p = 0; p < map.shape().plane(); ++p) {
    const double* v = map.data() + p * d;
    const auto s = lrn_scales(v, d, params);
    for (std::size_t c = 0; c < d; ++c) out[p * d + c] = v[c] * inv_pow(s[c], params.beta);
  }
  return out;
}

FeatureMap lrn_backward(const FeatureMap& input, const LrnParams& params, const FeatureMap& upstream) {
  check_lrn(params);
  require_same_shape(input.shape(), upstream.shape(), "lrn_backward");
  const std::size_t d = input.channels();
  const long half = static_cast<long>(params.size / 2);
  const double coef = params.alpha / static_cast<double>(params.size);
  FeatureMap out(input.shape());
  for (std::size_t p = 0; p < input.shape().plane(); ++p) {
    const double* v = input.data() + p * d;
    const double* g = upstream.data() + p * d;
    const auto s = lrn_scales(v, d, params);
    // t_c = g_c * v_c * beta * s_c^(-beta-1), reused by every j in c's neighbourhood.
    std::vector<double> t(d);
    for (std::size_t c = 0; c < d; ++c) t[c] = g[c] * v[c] * params.beta * std::pow(s[c], -params.beta - 1.0);
    for (long j = 0; j < static_cast<long>(d); ++j) {
      double cross = 0.0;
      for (long c = std::max(0L, j - half); c <= std::min(static_cast<long>(d) - 1, j + half); ++c) {
        cross += t[static_cast<std::size_t>(c)];
      }
      const auto ju = static_cast<std::size_t>(j);
      out[p * d + ju] = g[ju] * std::pow(s[ju], -params.beta) - 2.0 * coef * v[ju] * cross;
    }
  }
  return out;
}

}  // namespace msc
