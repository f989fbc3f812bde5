#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "msc/fft.hpp"
#include "msc/signal.hpp"
#include "msc/tensor_io.hpp"
#include "oracles.hpp"

using namespace msc;

TEST(Tensor, RejectsZeroDims) {
  EXPECT_THROW(FeatureMap(0, 3, 1), std::invalid_argument);
  EXPECT_THROW(FeatureMap(Shape{2, 2, 1}, std::vector<double>(3)), std::invalid_argument);
}

TEST(Tensor, ChannelLastIndexing) {
  FeatureMap m(2, 3, 4);
  m(1, 2, 3) = 7.0;
  EXPECT_EQ(m[(1 * 3 + 2) * 4 + 3], 7.0);
}

TEST(Tensor, CircshiftMovesSamples) {
  std::mt19937_64 rng(3);
  const FeatureMap m = oracle::random_map(4, 5, 2, rng);
  const FeatureMap s = circshift(m, 1, -2);
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 5; ++c)
      for (std::size_t d = 0; d < 2; ++d) EXPECT_EQ(s((r + 1) % 4, (c + 3) % 5, d), m(r, c, d));
}

TEST(Tensor, SelectAndConcatChannels) {
  std::mt19937_64 rng(4);
  const FeatureMap a = oracle::random_map(3, 3, 4, rng), b = oracle::random_map(3, 3, 2, rng);
  const FeatureMap ab = concat_channels(a, b);
  ASSERT_EQ(ab.channels(), 6u);
  EXPECT_EQ(ab(2, 1, 0), a(2, 1, 0));
  EXPECT_EQ(ab(2, 1, 5), b(2, 1, 1));
  const std::size_t idx[] = {3, 1};
  const FeatureMap s = select_channels(a, idx);
  EXPECT_EQ(s(1, 2, 0), a(1, 2, 3));
  EXPECT_EQ(s(1, 2, 1), a(1, 2, 1));
  EXPECT_THROW(concat_channels(a, FeatureMap(2, 3, 1)), std::invalid_argument);
}

TEST(Fft, ConstantMapIsDcOnly) {
  const FeatureMap m(8, 8, 1, 2.5);
  const Spectrum s = fft2(m);
  EXPECT_NEAR(s[0].real(), 64 * 2.5, 1e-12);
  for (std::size_t i = 1; i < s.size(); ++i) EXPECT_LT(std::abs(s[i]), 1e-12);
}

TEST(Fft, ImpulseIsFlat) {
  FeatureMap m(6, 5, 2);
  m(0, 0, 0) = 1.0;
  m(0, 0, 1) = 1.0;
  for (const auto& v : fft2(m)) EXPECT_NEAR(std::abs(v - Complex(1.0, 0.0)), 0.0, 1e-12);
}

TEST(Fft, MatchesNaiveDft) {
  std::mt19937_64 rng(5);
  const FeatureMap m = oracle::random_map(5, 7, 11, rng);
  const Spectrum s = fft2(m);
  for (std::size_t ch : {0u, 4u, 10u})
    for (std::size_t u = 0; u < 5; ++u)
      for (std::size_t v = 0; v < 7; ++v) EXPECT_LT(std::abs(s(u, v, ch) - oracle::dft_bin(m, ch, u, v)), 1e-10);
}

TEST(Fft, ParsevalPerChannel) {
  std::mt19937_64 rng(6);
  const FeatureMap m = oracle::random_map(5, 7, 3, rng);
  const Spectrum s = fft2(m);
  for (std::size_t l = 0; l < 3; ++l) {
    double e = 0.0, se = 0.0;
    for (std::size_t k = 0; k < 35; ++k) {
      e += m[k * 3 + l] * m[k * 3 + l];
      se += std::norm(s[k * 3 + l]);
    }
    EXPECT_NEAR(e, se / 35.0, 1e-9 * e);
  }
}

TEST(Fft, RoundTripProperty) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 25; ++t) {
    std::uniform_int_distribution<std::size_t> dim(1, 17), ch(1, 12);
    const FeatureMap m = oracle::random_map(dim(rng), dim(rng), ch(rng), rng);
    EXPECT_LT(oracle::relative_diff(ifft2(fft2(m)), m), 1e-9);
  }
}

TEST(Fft, HermitianSymmetryOfRealInput) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 10; ++t) {
    std::uniform_int_distribution<std::size_t> dim(1, 16);
    EXPECT_LT(hermitian_residual(fft2(oracle::random_map(dim(rng), dim(rng), 3, rng))), 1e-9);
  }
}

TEST(Fft, RejectsNonFinite) {
  FeatureMap m(3, 3, 1);
  m[4] = std::nan("");
  EXPECT_THROW(fft2(m), std::invalid_argument);
  m[4] = INFINITY;
  EXPECT_THROW(fft2(m), std::invalid_argument);
}

TEST(Spectral, HadamardAndConj) {
  Spectrum a(1, 1, 1), b(1, 1, 1);
  a[0] = {1.0, 2.0};
  b[0] = {3.0, -1.0};
  EXPECT_EQ(hadamard(a, b)[0], Complex(5.0, 5.0));
  std::mt19937_64 rng(9);
  const Spectrum s = fft2(oracle::random_map(4, 4, 2, rng));
  const Spectrum ones(s.shape(), Complex(1.0, 0.0));
  EXPECT_EQ(hadamard(s, ones).values().size(), s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_EQ(hadamard(s, ones)[i], s[i]);
    EXPECT_EQ(conj(conj(s))[i], s[i]);
  }
  EXPECT_THROW(hadamard(s, Spectrum(4, 4, 1)), std::invalid_argument);
}

TEST(Label, PeakAndProfile) {
  const GaussianLabel g = gaussian_label(16, 16, 8, 8, 2.0);
  EXPECT_DOUBLE_EQ(g.values(8, 8), 1.0);
  EXPECT_NEAR(g.values(8, 10), std::exp(-0.5), 1e-12);
  EXPECT_NEAR(g.values(10, 8), 0.60653, 1e-5);
  for (double v : g.values) {
    EXPECT_GT(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}

TEST(Label, ReflectionSymmetric) {
  const GaussianLabel g = gaussian_label(16, 16, 8, 8, 3.0);
  for (std::size_t r = 1; r < 16; ++r)
    for (std::size_t c = 1; c < 16; ++c) {
      EXPECT_NEAR(g.values(r, c), g.values(16 - r, c), 1e-15);
      EXPECT_NEAR(g.values(r, c), g.values(r, 16 - c), 1e-15);
    }
}

TEST(Label, WrapsAroundBorders) {
  const GaussianLabel g = gaussian_label(10, 10, 0, 0, 1.5);
  EXPECT_NEAR(g.values(9, 0), g.values(1, 0), 1e-15);
  EXPECT_NEAR(g.values(0, 9), g.values(0, 1), 1e-15);
}

TEST(Label, RejectsNonPositiveSigma) {
  EXPECT_THROW(gaussian_label(4, 4, 2, 2, 0.0), std::invalid_argument);
  EXPECT_THROW(gaussian_label(4, 4, 2, 2, -1.0), std::invalid_argument);
}

TEST(Label, DefaultSigma) { EXPECT_DOUBLE_EQ(default_label_sigma(20, 5), 1.0); }

TEST(Window, DegenerateAndBorders) {
  EXPECT_EQ(hann_window(1, 1)[0], 1.0);
  const FeatureMap w = hann_window(9, 9);
  EXPECT_NEAR(w(4, 4), 1.0, 1e-15);
  const FeatureMap ones(9, 9, 3, 1.0);
  const FeatureMap wo = apply_window(ones, w);
  for (std::size_t r = 0; r < 9; ++r)
    for (std::size_t c = 0; c < 9; ++c) {
      for (std::size_t d = 0; d < 3; ++d) EXPECT_EQ(wo(r, c, d), w(r, c));
      EXPECT_GE(w(r, c), 0.0);
      EXPECT_LE(w(r, c), 1.0);
    }
  for (std::size_t i = 0; i < 9; ++i) {
    EXPECT_EQ(wo(0, i, 0), 0.0);
    EXPECT_EQ(wo(8, i, 1), 0.0);
    EXPECT_EQ(wo(i, 0, 2), 0.0);
  }
  EXPECT_THROW(apply_window(ones, hann_window(8, 9)), std::invalid_argument);
}

TEST(Correlation, ImpulseKernels) {
  std::mt19937_64 rng(10);
  const FeatureMap z = oracle::random_map(5, 6, 1, rng);
  FeatureMap h(5, 6, 1);
  h(0, 0) = 1.0;
  EXPECT_EQ(oracle::max_diff(circular_correlate_spatial(h, z), z), 0.0);
  FeatureMap h1(5, 6, 1);
  h1(1, 0) = 1.0;
  const FeatureMap r = circular_correlate_spatial(h1, z);
  for (std::size_t m = 0; m < 5; ++m)
    for (std::size_t n = 0; n < 6; ++n) EXPECT_EQ(r(m, n), z((m + 1) % 5, n));
  EXPECT_THROW(circular_correlate_spatial(h, FeatureMap(5, 5, 1)), std::invalid_argument);
}

TEST(Correlation, TheoremOnRandomInputs) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 20; ++t) {
    std::uniform_int_distribution<std::size_t> dim(1, 16), ch(1, 4);
    const std::size_t h = dim(rng), w = dim(rng), d = ch(rng);
    const FeatureMap a = oracle::random_map(h, w, d, rng), b = oracle::random_map(h, w, d, rng);
    const FeatureMap fourier = ifft2(conj_dot_channels(fft2(a), fft2(b)));
    EXPECT_LT(oracle::relative_diff(fourier, circular_correlate_spatial(a, b)), 1e-9);
    EXPECT_LT(oracle::relative_diff(circular_correlate_spatial(a, b), oracle::correlate(a, b)), 1e-12);
  }
}

TEST(Msct, RoundTripFloat32) {
  std::mt19937_64 rng(12);
  const FeatureMap m = oracle::random_map(3, 4, 5, rng);
  std::stringstream ss;
  write_msct(ss, m);
  EXPECT_EQ(ss.str().size(), 4u + 16u + 4u * 60u);
  EXPECT_EQ(ss.str().substr(0, 4), "MSCT");
  const FeatureMap back = read_msct(ss);
  ASSERT_EQ(back.shape(), m.shape());
  for (std::size_t i = 0; i < m.size(); ++i) EXPECT_EQ(back[i], static_cast<double>(static_cast<float>(m[i])));
}

TEST(Msct, HeaderIsLittleEndian) {
  std::stringstream ss;
  write_msct(ss, FeatureMap(2, 3, 258, 0.0));
  const std::string s = ss.str();
  const auto u32 = [&](std::size_t off) {
    return static_cast<unsigned>(static_cast<unsigned char>(s[off])) |
           static_cast<unsigned>(static_cast<unsigned char>(s[off + 1])) << 8 |
           static_cast<unsigned>(static_cast<unsigned char>(s[off + 2])) << 16 |
           static_cast<unsigned>(static_cast<unsigned char>(s[off + 3])) << 24;
  };
  EXPECT_EQ(u32(4), kMsctVersion);
  EXPECT_EQ(u32(8), 2u);
  EXPECT_EQ(u32(12), 3u);
  EXPECT_EQ(u32(16), 258u);
}

TEST(Msct, RejectsMalformed) {
  std::stringstream bad_magic("MSCX");
  EXPECT_THROW(read_msct(bad_magic), std::runtime_error);
  std::stringstream ss;
  write_msct(ss, FeatureMap(2, 2, 1, 1.0));
  std::string s = ss.str();
  std::stringstream truncated(s.substr(0, s.size() - 2));
  EXPECT_THROW(read_msct(truncated), std::runtime_error);
  s[4] = 9;
  std::stringstream wrong_version(s);
  EXPECT_THROW(read_msct(wrong_version), std::runtime_error);
}
