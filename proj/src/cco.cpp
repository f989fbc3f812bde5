#include "msc/cco.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "msc/fft.hpp"

namespace msc {
namespace {

constexpr double kPi = std::numbers::pi;

double sinc(double f) {
  if (std::abs(f) < 1e-12) return 1.0;
  return std::sin(kPi * f) / (kPi * f);
}

double cubic_bspline_value(double t) {
  const double a = std::abs(t);
  if (a < 1.0) return 2.0 / 3.0 - a * a + 0.5 * a * a * a;
  if (a < 2.0) {
    const double u = 2.0 - a;
    return u * u * u / 6.0;
  }
  return 0.0;
}

// Signed frequency index of DFT bin k for an n-point transform; the Nyquist
// bin of an even transform maps to +n/2.
long signed_index(std::size_t k, std::size_t n) {
  return 2 * k <= n ? static_cast<long>(k) : static_cast<long>(k) - static_cast<long>(n);
}

bool is_nyquist(std::size_t k, std::size_t n) { return n % 2 == 0 && 2 * k == n; }

std::size_t wrap_index(long k, std::size_t m) {
  const long mm = static_cast<long>(m);
  return static_cast<std::size_t>(((k % mm) + mm) % mm);
}

double wrap(double p, double period) {
  double q = std::fmod(p, period);
  if (q < 0.0) q += period;
  return q;
}

Spectrum label_spectrum(const GaussianLabel& g, const Spectrum& interpolated) {
  if (g.values.height() != interpolated.height() || g.values.width() != interpolated.width()) {
    throw std::invalid_argument("CCO: label " + to_string(g.values.shape()) + " does not match samples " +
                                to_string(interpolated.shape()));
  }
  return fft2(g.values);
}

}  // namespace

InterpKernel::InterpKernel(std::function<double(double)> value, std::function<double(double)> spectrum,
                           double support, bool band_limited)
    : value_(std::move(value)), spectrum_(std::move(spectrum)), support_(support), band_limited_(band_limited) {}

InterpKernel InterpKernel::cubic_bspline() {
  return InterpKernel(cubic_bspline_value, [](double f) { return std::pow(sinc(f), 4); }, 2.0, false);
}

InterpKernel InterpKernel::linear() {
  return InterpKernel([](double t) { return std::max(0.0, 1.0 - std::abs(t)); },
                      [](double f) { return std::pow(sinc(f), 2); }, 1.0, false);
}

InterpKernel InterpKernel::ideal() {
  return InterpKernel(sinc, [](double f) { return std::abs(f) <= 0.5 ? 1.0 : 0.0; }, 0.0, true);
}

double InterpKernel::operator()(double t) const { return value_(t); }
double InterpKernel::spectrum(double f) const { return spectrum_(f); }

double InterpKernel::periodic(double t, std::size_t n) const {
  if (n == 0) throw std::invalid_argument("InterpKernel::periodic: empty period");
  const double nn = static_cast<double>(n);
  if (band_limited_) {
    // Trigonometric interpolant of a unit impulse; an even period splits the
    // Nyquist term evenly between +n/2 and -n/2.
    if (n == 1) return 1.0;
    const double s = std::sin(kPi * t / nn);
    if (std::abs(s) < 1e-12) return 1.0;
    if (n % 2 == 1) return std::sin(kPi * t) / (nn * s);
    return std::sin(kPi * t) * std::cos(kPi * t / nn) / (nn * s);
  }
  double sum = 0.0;
  const long lo = static_cast<long>(std::ceil((-support_ - t) / nn));
  const long hi = static_cast<long>(std::floor((support_ - t) / nn));
  for (long m = lo; m <= hi; ++m) sum += value_(t + static_cast<double>(m) * nn);
  return sum;
}

std::vector<double> InterpKernel::sample_grid(std::size_t oversample) const {
  if (oversample == 0) throw std::invalid_argument("InterpKernel::sample_grid: oversample must be positive");
  const double radius = band_limited_ ? 8.0 : support_;
  const long n = static_cast<long>(std::lround(radius * static_cast<double>(oversample)));
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(2 * n + 1));
  for (long i = -n; i <= n; ++i) out.push_back(value_(static_cast<double>(i) / static_cast<double>(oversample)));
  return out;
}

double interpolate_1d(std::span<const double> samples, const InterpKernel& kernel, double p, double period) {
  if (samples.empty()) throw std::invalid_argument("interpolate_1d: no samples");
  if (!(period > 0.0)) throw std::invalid_argument("interpolate_1d: period must be positive");
  const std::size_t n = samples.size();
  const double t = wrap(p, period) * static_cast<double>(n) / period;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += samples[i] * kernel.periodic(t - static_cast<double>(i), n);
  return sum;
}

double interpolate_channel(const FeatureMap& map, std::size_t channel, const InterpKernel& kernel, double p_row,
                           double p_col, double period_rows, double period_cols) {
  if (channel >= map.channels()) throw std::out_of_range("interpolate_channel: channel out of range");
  if (!(period_rows > 0.0) || !(period_cols > 0.0)) {
    throw std::invalid_argument("interpolate_channel: periods must be positive");
  }
  const std::size_t h = map.height(), w = map.width();
  const double tr = wrap(p_row, period_rows) * static_cast<double>(h) / period_rows;
  const double tc = wrap(p_col, period_cols) * static_cast<double>(w) / period_cols;
  std::vector<double> wc(w);
  for (std::size_t c = 0; c < w; ++c) wc[c] = kernel.periodic(tc - static_cast<double>(c), w);
  double sum = 0.0;
  for (std::size_t r = 0; r < h; ++r) {
    const double wr = kernel.periodic(tr - static_cast<double>(r), h);
    if (wr == 0.0) continue;
    double row = 0.0;
    for (std::size_t c = 0; c < w; ++c) row += map(r, c, channel) * wc[c];
    sum += wr * row;
  }
  return sum;
}

Spectrum interpolated_spectrum(const FeatureMap& map, const InterpKernel& kernel) {
  Spectrum y = fft2(map);
  const std::size_t h = map.height(), w = map.width(), d = map.channels();
  std::vector<double> br(h), bc(w);
  for (std::size_t k = 0; k < h; ++k) {
    br[k] = kernel.spectrum(static_cast<double>(signed_index(k, h)) / static_cast<double>(h));
  }
  for (std::size_t k = 0; k < w; ++k) {
    bc[k] = kernel.spectrum(static_cast<double>(signed_index(k, w)) / static_cast<double>(w));
  }
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      const double b = br[r] * bc[c];
      for (std::size_t l = 0; l < d; ++l) y(r, c, l) *= b;
    }
  }
  return y;
}

bool in_band(std::size_t k_row, std::size_t k_col, std::size_t rows, std::size_t cols, const Bandwidth& band) {
  const auto kr = static_cast<std::size_t>(std::abs(signed_index(k_row, rows)));
  const auto kc = static_cast<std::size_t>(std::abs(signed_index(k_col, cols)));
  return (band.rows == 0 || kr <= band.rows) && (band.cols == 0 || kc <= band.cols);
}

CcoFilter CcoModel::filter() const {
  CcoFilter f{Spectrum(numerator.shape()), band, kernel};
  const std::size_t h = numerator.height(), w = numerator.width(), d = numerator.channels();
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      if (!in_band(r, c, h, w, band)) continue;
      const Complex b = denominator(r, c) + lambda;
      for (std::size_t l = 0; l < d; ++l) f.coefficients(r, c, l) = numerator(r, c, l) / b;
    }
  }
  return f;
}

CcoModel train_cco_model(const Spectrum& interpolated, const GaussianLabel& g, double lambda_c, Bandwidth band,
                         InterpKernel kernel) {
  if (!(lambda_c > 0.0)) throw std::invalid_argument("train_cco_model: lambda_c must be positive");
  const Spectrum gh = label_spectrum(g, interpolated);
  CcoModel model{Spectrum(interpolated.shape()), Spectrum(interpolated.height(), interpolated.width(), 1), lambda_c,
                 band, std::move(kernel)};
  const std::size_t d = interpolated.channels();
  for (std::size_t k = 0; k < interpolated.shape().plane(); ++k) {
    double b = 0.0;
    for (std::size_t l = 0; l < d; ++l) {
      const Complex j = interpolated[k * d + l];
      model.numerator[k * d + l] = std::conj(j) * gh[k];
      b += std::norm(j);
    }
    model.denominator[k] = Complex(b, 0.0);
  }
  return model;
}

CcoModel update_cco_model(const CcoModel& model, const Spectrum& interpolated, const GaussianLabel& g, double mu) {
  if (!(mu >= 0.0 && mu <= 1.0)) throw std::invalid_argument("update_cco_model: mu must lie in [0, 1]");
  require_same_shape(model.numerator.shape(), interpolated.shape(), "update_cco_model");
  const CcoModel fresh = train_cco_model(interpolated, g, model.lambda, model.band, model.kernel);
  CcoModel out = model;
  for (std::size_t i = 0; i < out.numerator.size(); ++i) {
    out.numerator[i] = (1.0 - mu) * model.numerator[i] + mu * fresh.numerator[i];
  }
  for (std::size_t i = 0; i < out.denominator.size(); ++i) {
    out.denominator[i] = (1.0 - mu) * model.denominator[i] + mu * fresh.denominator[i];
  }
  return out;
}

CcoFilter train_cco_filter(const Spectrum& interpolated, const GaussianLabel& g, double lambda_c, Bandwidth band,
                           InterpKernel kernel) {
  return train_cco_model(interpolated, g, lambda_c, band, std::move(kernel)).filter();
}

double cco_objective(const CcoFilter& filter, const Spectrum& interpolated, const GaussianLabel& g,
                     double lambda_c) {
  require_same_shape(filter.coefficients.shape(), interpolated.shape(), "cco_objective");
  const Spectrum gh = label_spectrum(g, interpolated);
  const std::size_t d = interpolated.channels();
  double data = 0.0, reg = 0.0;
  for (std::size_t k = 0; k < interpolated.shape().plane(); ++k) {
    Complex s = 0.0;
    for (std::size_t l = 0; l < d; ++l) {
      const Complex f = filter.coefficients[k * d + l];
      s += f * interpolated[k * d + l];
      reg += std::norm(f);
    }
    data += std::norm(s - gh[k]);
  }
  return data + lambda_c * reg;
}

FeatureMap confidence_map_from_spectrum(const CcoFilter& filter, const Spectrum& interpolated, std::size_t grid_factor,
                                        double* imag_residue) {
  if (grid_factor == 0) throw std::invalid_argument("confidence_map: grid_factor must be positive");
  require_same_shape(filter.coefficients.shape(), interpolated.shape(), "confidence_map");
  const std::size_t h = interpolated.height(), w = interpolated.width(), d = interpolated.channels();
  const std::size_t mh = h * grid_factor, mw = w * grid_factor;
  Spectrum dense(mh, mw, 1);
  for (std::size_t r = 0; r < h; ++r) {
    const long sr = signed_index(r, h);
    const bool nr = is_nyquist(r, h);
    for (std::size_t c = 0; c < w; ++c) {
      Complex s = 0.0;
      for (std::size_t l = 0; l < d; ++l) s += filter.coefficients(r, c, l) * interpolated(r, c, l);
      if (s == Complex(0.0)) continue;
      const long sc = signed_index(c, w);
      const bool nc = is_nyquist(c, w);
      const double weight = (nr ? 0.5 : 1.0) * (nc ? 0.5 : 1.0);
      for (int fr = 0; fr < (nr ? 2 : 1); ++fr) {
        for (int fc = 0; fc < (nc ? 2 : 1); ++fc) {
          const std::size_t ir = wrap_index(fr == 0 ? sr : -sr, mh);
          const std::size_t ic = wrap_index(fc == 0 ? sc : -sc, mw);
          dense(ir, ic) += weight * s;
        }
      }
    }
  }
  const Spectrum values = ifft2_complex(dense);
  const double scale = static_cast<double>(grid_factor * grid_factor);
  FeatureMap out(mh, mw, 1);
  double peak = 0.0, imag = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = values[i].real() * scale;
    peak = std::max(peak, std::abs(out[i]));
    imag = std::max(imag, std::abs(values[i].imag()) * scale);
  }
  if (imag_residue) *imag_residue = peak > 0.0 ? imag / peak : imag;
  return out;
}

FeatureMap confidence_map(const CcoFilter& filter, const FeatureMap& y, std::size_t grid_factor) {
  return confidence_map_from_spectrum(filter, interpolated_spectrum(y, filter.kernel), grid_factor);
}

SubpixelPeak localize_subpixel(const FeatureMap& confidence, std::size_t grid_factor) {
  if (confidence.channels() != 1) throw std::invalid_argument("localize_subpixel: expected a 1-channel map");
  if (grid_factor == 0) throw std::invalid_argument("localize_subpixel: grid_factor must be positive");
  const std::size_t h = confidence.height(), w = confidence.width();
  SubpixelPeak p;
  p.value = confidence[0];
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      if (confidence(r, c) > p.value) {
        p.value = confidence(r, c);
        p.cell_row = r;
        p.cell_col = c;
      }
    }
  }
  auto fit = [](double left, double mid, double right) {
    const double denom = left - 2.0 * mid + right;
    if (denom >= 0.0) return 0.0;
    return std::clamp(0.5 * (left - right) / denom, -0.5, 0.5);
  };
  double dr = 0.0, dc = 0.0;
  if (h >= 3) dr = fit(confidence((p.cell_row + h - 1) % h, p.cell_col), p.value, confidence((p.cell_row + 1) % h, p.cell_col));
  if (w >= 3) dc = fit(confidence(p.cell_row, (p.cell_col + w - 1) % w), p.value, confidence(p.cell_row, (p.cell_col + 1) % w));
  const double g = static_cast<double>(grid_factor);
  p.row = (static_cast<double>(p.cell_row) + dr) / g;
  p.col = (static_cast<double>(p.cell_col) + dc) / g;
  return p;
}

}  // namespace msc
