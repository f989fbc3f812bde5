#pragma once

#include "msc/signal.hpp"
#include "msc/tensor.hpp"

namespace msc {

inline constexpr double kDefaultLambdaD = 1e-4;
inline constexpr double kDefaultDcfLearningRate = 0.012;

// Multi-channel linear DCF kept as running numerator/denominator statistics:
//   A^l = x_hat^l conj(g_hat),   B = sum_k x_hat^k conj(x_hat^k)
//   h_hat^l = A^l / (B + lambda)
struct DcfModel {
  Spectrum numerator;    // H x W x D
  Spectrum denominator;  // H x W x 1, real and nonnegative up to rounding
  double lambda = kDefaultLambdaD;

  Spectrum filter() const;
};

DcfModel train_filter(const FeatureMap& phi_x, const GaussianLabel& g, double lambda = kDefaultLambdaD);

// A <- (1 - mu) A + mu A_new, B <- (1 - mu) B + mu B_new.
DcfModel update_model(const DcfModel& model, const FeatureMap& phi_x_new, const GaussianLabel& g, double mu);

struct Peak {
  std::size_t row = 0;  // integer argmax
  std::size_t col = 0;
  double value = 0.0;
  double sub_row = 0.0;  // quadratic-refined location, in cells
  double sub_col = 0.0;
};

// Argmax with ties going to the smallest row, then column.
Peak find_peak(const FeatureMap& response);

// One parabola fit per axis through the peak and its circular neighbours;
// the offset is clamped to [-0.5, 0.5].
Peak refine_peak(const FeatureMap& response, Peak peak);

struct Detection {
  FeatureMap response;
  Peak peak;
};

// f = IDFT(sum_l conj(h_hat^l) z_hat^l)
Detection detect(const DcfModel& model, const FeatureMap& phi_z);

// Signed displacement of a refined peak from the label centre with circular wrap
// at half the map size.
double wrapped_offset(double position, double center, std::size_t size);

}  // namespace msc
