#include "msc/dcf.hpp"

#include <algorithm>
#include <cmath>

#include "msc/fft.hpp"

namespace msc {
namespace {

void statistics(const FeatureMap& phi_x, const GaussianLabel& g, Spectrum& numerator, Spectrum& denominator) {
  if (g.values.height() != phi_x.height() || g.values.width() != phi_x.width()) {
    throw std::invalid_argument("train_filter: label " + to_string(g.values.shape()) + " does not match features " +
                                to_string(phi_x.shape()));
  }
  const Spectrum x = fft2(phi_x);
  const Spectrum gh = fft2(g.values);
  const std::size_t d = phi_x.channels();
  numerator = Spectrum(phi_x.shape());
  denominator = Spectrum(phi_x.height(), phi_x.width(), 1);
  for (std::size_t k = 0; k < phi_x.shape().plane(); ++k) {
    const Complex gc = std::conj(gh[k]);
    double b = 0.0;
    for (std::size_t l = 0; l < d; ++l) {
      numerator[k * d + l] = x[k * d + l] * gc;
      b += std::norm(x[k * d + l]);
    }
    denominator[k] = Complex(b, 0.0);
  }
}

}  // namespace

Spectrum DcfModel::filter() const {
  Spectrum h(numerator.shape());
  const std::size_t d = numerator.channels();
  for (std::size_t k = 0; k < numerator.shape().plane(); ++k) {
    const Complex b = denominator[k] + lambda;
    for (std::size_t l = 0; l < d; ++l) h[k * d + l] = numerator[k * d + l] / b;
  }
  return h;
}

DcfModel train_filter(const FeatureMap& phi_x, const GaussianLabel& g, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("train_filter: lambda_d must be positive");
  DcfModel model;
  model.lambda = lambda;
  statistics(phi_x, g, model.numerator, model.denominator);
  return model;
}

DcfModel update_model(const DcfModel& model, const FeatureMap& phi_x_new, const GaussianLabel& g, double mu) {
  if (!(mu >= 0.0 && mu <= 1.0)) throw std::invalid_argument("update_model: mu must lie in [0, 1]");
  require_same_shape(model.numerator.shape(), phi_x_new.shape(), "update_model");
  Spectrum a_new, b_new;
  statistics(phi_x_new, g, a_new, b_new);
  DcfModel out = model;
  for (std::size_t i = 0; i < out.numerator.size(); ++i) {
    out.numerator[i] = (1.0 - mu) * model.numerator[i] + mu * a_new[i];
  }
  for (std::size_t i = 0; i < out.denominator.size(); ++i) {
    out.denominator[i] = (1.0 - mu) * model.denominator[i] + mu * b_new[i];
  }
  return out;
}

Peak find_peak(const FeatureMap& response) {
  if (response.empty() || response.channels() != 1) throw std::invalid_argument("find_peak: expected a 1-channel map");
  Peak p;
  p.value = response[0];
  for (std::size_t r = 0; r < response.height(); ++r) {
    for (std::size_t c = 0; c < response.width(); ++c) {
      if (response(r, c) > p.value) {
        p.value = response(r, c);
        p.row = r;
        p.col = c;
      }
    }
  }
  p.sub_row = static_cast<double>(p.row);
  p.sub_col = static_cast<double>(p.col);
  return p;
}

Peak refine_peak(const FeatureMap& response, Peak peak) {
  auto fit = [](double left, double mid, double right) {
    const double denom = left - 2.0 * mid + right;
    if (denom >= 0.0) return 0.0;  // not a strict local maximum
    return std::clamp(0.5 * (left - right) / denom, -0.5, 0.5);
  };
  const std::size_t h = response.height(), w = response.width();
  if (h >= 3) {
    peak.sub_row = static_cast<double>(peak.row) +
                   fit(response((peak.row + h - 1) % h, peak.col), peak.value, response((peak.row + 1) % h, peak.col));
  }
  if (w >= 3) {
    peak.sub_col = static_cast<double>(peak.col) +
                   fit(response(peak.row, (peak.col + w - 1) % w), peak.value, response(peak.row, (peak.col + 1) % w));
  }
  return peak;
}

Detection detect(const DcfModel& model, const FeatureMap& phi_z) {
  require_same_shape(model.numerator.shape(), phi_z.shape(), "detect");
  const Spectrum z = fft2(phi_z);
  const Spectrum h = model.filter();
  Detection det;
  det.response = ifft2(conj_dot_channels(h, z));
  det.peak = refine_peak(det.response, find_peak(det.response));
  return det;
}

double wrapped_offset(double position, double center, std::size_t size) {
  const double n = static_cast<double>(size);
  double d = position - center;
  if (d > n / 2.0) d -= n;
  if (d < -n / 2.0) d += n;
  return d;
}

}  // namespace msc
