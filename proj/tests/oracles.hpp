#pragma once

// Independent reference implementations used by the unit and acceptance tests.
// Nothing here goes through the library's Fourier-domain code paths.

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "msc/tensor.hpp"

namespace oracle {

using msc::FeatureMap;

inline FeatureMap random_map(std::size_t h, std::size_t w, std::size_t d, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  FeatureMap m(h, w, d);
  for (double& v : m) v = n(rng);
  return m;
}

// Rows index the circular shifts (m, n); columns index filter taps (l, p, q):
//   A[(m,n), (l,p,q)] = x^l[(p+m) mod H, (q+n) mod W]
// so that (A h)[m,n] is the circular correlation of h with x.
inline Eigen::MatrixXd circulant_design(const FeatureMap& x) {
  const std::size_t h = x.height(), w = x.width(), d = x.channels();
  Eigen::MatrixXd a(h * w, h * w * d);
  for (std::size_t m = 0; m < h; ++m)
    for (std::size_t n = 0; n < w; ++n)
      for (std::size_t l = 0; l < d; ++l)
        for (std::size_t p = 0; p < h; ++p)
          for (std::size_t q = 0; q < w; ++q)
            a(m * w + n, (l * h + p) * w + q) = x((p + m) % h, (q + n) % w, l);
  return a;
}

inline Eigen::VectorXd flat_label(const FeatureMap& g) {
  Eigen::VectorXd y(g.height() * g.width());
  for (std::size_t i = 0; i < g.height() * g.width(); ++i) y[i] = g[i];
  return y;
}

// argmin_h ||A h - g||^2 + lambda ||h||^2 solved in the dual: h = A^T (A A^T + lambda I)^-1 g.
inline FeatureMap ridge_filter(const FeatureMap& x, const FeatureMap& g, double lambda) {
  const Eigen::MatrixXd a = circulant_design(x);
  const Eigen::MatrixXd gram = a * a.transpose() + lambda * Eigen::MatrixXd::Identity(a.rows(), a.rows());
  const Eigen::VectorXd h = a.transpose() * gram.ldlt().solve(flat_label(g));
  FeatureMap out(x.shape());
  const std::size_t hh = x.height(), w = x.width();
  for (std::size_t l = 0; l < x.channels(); ++l)
    for (std::size_t p = 0; p < hh; ++p)
      for (std::size_t q = 0; q < w; ++q) out(p, q, l) = h[(l * hh + p) * w + q];
  return out;
}

inline Eigen::VectorXd flatten_filter(const FeatureMap& f) {
  Eigen::VectorXd v(f.size());
  const std::size_t h = f.height(), w = f.width();
  for (std::size_t l = 0; l < f.channels(); ++l)
    for (std::size_t p = 0; p < h; ++p)
      for (std::size_t q = 0; q < w; ++q) v[(l * h + p) * w + q] = f(p, q, l);
  return v;
}

inline double ridge_objective(const FeatureMap& x, const FeatureMap& g, const FeatureMap& filter, double lambda) {
  const Eigen::MatrixXd a = circulant_design(x);
  const Eigen::VectorXd h = flatten_filter(filter);
  return (a * h - flat_label(g)).squaredNorm() + lambda * h.squaredNorm();
}

// r[m,n] = sum_l sum_{p,q} h^l[p,q] z^l[(p+m) mod H, (q+n) mod W]
inline FeatureMap correlate(const FeatureMap& h, const FeatureMap& z) {
  FeatureMap r(h.height(), h.width(), 1);
  for (std::size_t m = 0; m < h.height(); ++m)
    for (std::size_t n = 0; n < h.width(); ++n) {
      double s = 0.0;
      for (std::size_t p = 0; p < h.height(); ++p)
        for (std::size_t q = 0; q < h.width(); ++q)
          for (std::size_t l = 0; l < h.channels(); ++l)
            s += h(p, q, l) * z((p + m) % h.height(), (q + n) % h.width(), l);
      r(m, n) = s;
    }
  return r;
}

inline double max_abs(const FeatureMap& m) {
  double a = 0.0;
  for (double v : m) a = std::max(a, std::abs(v));
  return a;
}

inline double max_diff(const FeatureMap& a, const FeatureMap& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

inline double relative_diff(const FeatureMap& got, const FeatureMap& want) {
  const double s = oracle::max_abs(want);
  return oracle::max_diff(got, want) / (s > 0.0 ? s : 1.0);
}

// Naive DFT of one channel, for checking the FFT wrapper.
inline std::complex<double> dft_bin(const FeatureMap& m, std::size_t ch, std::size_t u, std::size_t v) {
  std::complex<double> s = 0.0;
  const double pi = std::acos(-1.0);
  for (std::size_t r = 0; r < m.height(); ++r)
    for (std::size_t c = 0; c < m.width(); ++c) {
      const double ang = -2.0 * pi *
                         (static_cast<double>(u * r) / static_cast<double>(m.height()) +
                          static_cast<double>(v * c) / static_cast<double>(m.width()));
      s += m(r, c, ch) * std::complex<double>(std::cos(ang), std::sin(ang));
    }
  return s;
}

}  // namespace oracle
