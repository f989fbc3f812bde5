#pragma once

#include <functional>
#include <span>

#include "msc/signal.hpp"
#include "msc/tensor.hpp"

namespace msc {

// Interpolation function b for mapping discrete samples to a periodic continuous
// signal. The argument t is measured in sample spacings (P / N). `spectrum(f)` is
// the continuous Fourier transform of b(t) at f cycles per sample.
class InterpKernel {
 public:
  // Cardinal cubic B-spline, support [-2, 2], partition of unity.
  static InterpKernel cubic_bspline();
  // Hat function, support [-1, 1], interpolatory.
  static InterpKernel linear();
  // Band-limited (periodic sinc) kernel with a flat spectrum over the DFT band.
  static InterpKernel ideal();

  double operator()(double t) const;
  double spectrum(double f) const;
  double support() const { return support_; }  // radius in samples; 0 for ideal
  bool band_limited() const { return band_limited_; }

  // Periodised kernel sum_m b(t + m N) for an N-sample period.
  double periodic(double t, std::size_t n) const;

  // b sampled at spacing 1/oversample over [-support, support].
  std::vector<double> sample_grid(std::size_t oversample) const;

 private:
  InterpKernel(std::function<double(double)> value, std::function<double(double)> spectrum, double support,
               bool band_limited);
  std::function<double(double)> value_;
  std::function<double(double)> spectrum_;
  double support_ = 0.0;
  bool band_limited_ = false;
};

// J{y}(p) = sum_n y[n] b(p / T - n), T = period / N, circular. p is wrapped into [0, period).
double interpolate_1d(std::span<const double> samples, const InterpKernel& kernel, double p, double period);

// Separable 2-D version on a single channel of `map`.
double interpolate_channel(const FeatureMap& map, std::size_t channel, const InterpKernel& kernel, double p_row,
                           double p_col, double period_rows, double period_cols);

// Fourier coefficients of J{y^d} on the DFT band, expressed in DFT units
// (N times the Fourier-series coefficient): Y^d[k] b_hat(k_r / N_r) b_hat(k_c / N_c).
Spectrum interpolated_spectrum(const FeatureMap& map, const InterpKernel& kernel);

// Per-axis frequency cut-off; 0 means the full DFT band.
struct Bandwidth {
  std::size_t rows = 0;
  std::size_t cols = 0;
};

bool in_band(std::size_t k_row, std::size_t k_col, std::size_t rows, std::size_t cols, const Bandwidth& band);

struct CcoFilter {
  Spectrum coefficients;  // H x W x D, zero outside the band
  Bandwidth band;
  InterpKernel kernel = InterpKernel::cubic_bspline();
};

// Running statistics for per-frequency ridge learning:
//   numerator^d = conj(J^d) g_hat,  denominator = sum_d |J^d|^2
//   f_hat^d = numerator^d / (denominator + lambda_c) inside the band
struct CcoModel {
  Spectrum numerator;
  Spectrum denominator;
  double lambda = 1e-4;
  Bandwidth band;
  InterpKernel kernel = InterpKernel::cubic_bspline();

  CcoFilter filter() const;
};

CcoModel train_cco_model(const Spectrum& interpolated, const GaussianLabel& g, double lambda_c, Bandwidth band = {},
                         InterpKernel kernel = InterpKernel::cubic_bspline());
CcoModel update_cco_model(const CcoModel& model, const Spectrum& interpolated, const GaussianLabel& g, double mu);

// Independent per-frequency ridge minimising
//   sum_k |sum_d f^d[k] J^d[k] - g_hat[k]|^2 + lambda_c sum_{k,d} |f^d[k]|^2
// over coefficients restricted to the band.
CcoFilter train_cco_filter(const Spectrum& interpolated, const GaussianLabel& g, double lambda_c, Bandwidth band = {},
                           InterpKernel kernel = InterpKernel::cubic_bspline());

// Value of the objective above for a given filter.
double cco_objective(const CcoFilter& filter, const Spectrum& interpolated, const GaussianLabel& g, double lambda_c);

// Q_f{y} = sum_d f^d (*) J_d{y^d} on a grid_factor-times denser grid.
FeatureMap confidence_map(const CcoFilter& filter, const FeatureMap& y, std::size_t grid_factor = 1);
FeatureMap confidence_map_from_spectrum(const CcoFilter& filter, const Spectrum& interpolated, std::size_t grid_factor,
                                        double* imag_residue = nullptr);

struct SubpixelPeak {
  double row = 0.0;  // refined location in coarse cells (fine index / grid_factor)
  double col = 0.0;
  double value = 0.0;
  std::size_t cell_row = 0;  // integer argmax on the fine grid
  std::size_t cell_col = 0;
};

// Dense-grid argmax (ties to the smallest row, then column) followed by one
// quadratic refinement step per axis.
SubpixelPeak localize_subpixel(const FeatureMap& confidence, std::size_t grid_factor = 1);

}  // namespace msc
