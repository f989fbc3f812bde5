#include <gtest/gtest.h>

#include <cmath>

#include "msc/dcf.hpp"
#include "msc/dcf_tracker.hpp"
#include "msc/fft.hpp"
#include "msc/synth.hpp"
#include "oracles.hpp"

using namespace msc;

namespace {

FeatureMap spatial_filter(const DcfModel& model) { return ifft2(model.filter()); }

GaussianLabel centred_label(std::size_t h, std::size_t w, double sigma = 1.0) {
  return gaussian_label(h, w, static_cast<double>(h / 2), static_cast<double>(w / 2), sigma);
}

double residual(const FeatureMap& a, const FeatureMap& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace

TEST(TrainFilter, ZeroFeaturesGiveZeroFilter) {
  const DcfModel m = train_filter(FeatureMap(6, 6, 3), centred_label(6, 6));
  for (const auto& v : m.filter()) EXPECT_EQ(std::abs(v), 0.0);
}

TEST(TrainFilter, RejectsNonPositiveLambda) {
  const FeatureMap x(4, 4, 1, 1.0);
  EXPECT_THROW(train_filter(x, centred_label(4, 4), 0.0), std::invalid_argument);
  EXPECT_THROW(train_filter(x, centred_label(4, 4), -1.0), std::invalid_argument);
  EXPECT_THROW(train_filter(x, centred_label(5, 4)), std::invalid_argument);
}

TEST(TrainFilter, MatchesCirculantRidge4x4) {
  std::mt19937_64 rng(21);
  const FeatureMap x = oracle::random_map(4, 4, 1, rng);
  const GaussianLabel g = centred_label(4, 4);
  const double lambda = 1e-2;
  const FeatureMap want = oracle::ridge_filter(x, g.values, lambda);
  EXPECT_LT(oracle::relative_diff(spatial_filter(train_filter(x, g, lambda)), want), 1e-8);
}

TEST(TrainFilter, MatchesCirculantRidgeRandomSizes) {
  std::mt19937_64 rng(22);
  std::uniform_int_distribution<std::size_t> dim(1, 6), ch(1, 3);
  for (int t = 0; t < 20; ++t) {
    const std::size_t h = dim(rng), w = dim(rng), d = ch(rng);
    const FeatureMap x = oracle::random_map(h, w, d, rng);
    const GaussianLabel g = centred_label(h, w);
    const FeatureMap want = oracle::ridge_filter(x, g.values, kDefaultLambdaD);
    EXPECT_LT(oracle::relative_diff(spatial_filter(train_filter(x, g)), want), 1e-8) << h << "x" << w << "x" << d;
  }
}

TEST(TrainFilter, PerturbationNeverLowersObjective) {
  std::mt19937_64 rng(23);
  const FeatureMap x = oracle::random_map(6, 6, 3, rng);
  const GaussianLabel g = centred_label(6, 6);
  const double lambda = 1e-3;
  const FeatureMap h = spatial_filter(train_filter(x, g, lambda));
  const double best = oracle::ridge_objective(x, g.values, h, lambda);
  for (int t = 0; t < 10; ++t) {
    const FeatureMap dir = oracle::random_map(6, 6, 3, rng, 1e-3);
    FeatureMap moved = h;
    for (std::size_t i = 0; i < moved.size(); ++i) moved[i] += dir[i];
    EXPECT_GE(oracle::ridge_objective(x, g.values, moved, lambda), best);
  }
}

TEST(TrainFilter, SelfResidualShrinksWithLambda) {
  std::mt19937_64 rng(24);
  const FeatureMap x = oracle::random_map(8, 8, 1, rng);
  const GaussianLabel g = centred_label(8, 8);
  double previous = INFINITY;
  for (double lambda : {1e-1, 1e-2, 1e-3}) {
    const double r = residual(detect(train_filter(x, g, lambda), x).response, g.values);
    EXPECT_LT(r, previous) << lambda;
    previous = r;
  }
}

TEST(TrainFilter, DenominatorIsRealNonnegative) {
  std::mt19937_64 rng(25);
  const DcfModel m = train_filter(oracle::random_map(7, 9, 4, rng), centred_label(7, 9));
  for (const auto& b : m.denominator) {
    EXPECT_GE(b.real(), 0.0);
    EXPECT_LT(std::abs(b.imag()), 1e-9);
  }
  const Spectrum h = m.filter();
  for (std::size_t k = 0; k < 63; ++k)
    for (std::size_t l = 0; l < 4; ++l)
      EXPECT_LT(std::abs(h[k * 4 + l] - m.numerator[k * 4 + l] / (m.denominator[k] + m.lambda)), 1e-15);
}

TEST(Detect, MatchesSpatialCorrelation) {
  std::mt19937_64 rng(26);
  std::uniform_int_distribution<std::size_t> dim(1, 16), ch(1, 4);
  for (int t = 0; t < 20; ++t) {
    const std::size_t h = dim(rng), w = dim(rng), d = ch(rng);
    const FeatureMap x = oracle::random_map(h, w, d, rng), z = oracle::random_map(h, w, d, rng);
    const DcfModel m = train_filter(x, centred_label(h, w));
    const FeatureMap want = oracle::correlate(spatial_filter(m), z);
    EXPECT_LT(oracle::relative_diff(detect(m, z).response, want), 1e-9);
  }
}

TEST(Detect, SelfDetectionPeaksAtLabelCentre) {
  std::mt19937_64 rng(27);
  const FeatureMap x = oracle::random_map(12, 10, 3, rng);
  const Detection det = detect(train_filter(x, centred_label(12, 10)), x);
  EXPECT_EQ(det.peak.row, 6u);
  EXPECT_EQ(det.peak.col, 5u);
}

TEST(Detect, ShiftedInputShiftsPeak) {
  std::mt19937_64 rng(28);
  const FeatureMap x = oracle::random_map(12, 12, 2, rng);
  const Detection det = detect(train_filter(x, centred_label(12, 12)), circshift(x, 2, 3));
  EXPECT_EQ(det.peak.row, 8u);
  EXPECT_EQ(det.peak.col, 9u);
}

TEST(Detect, ShiftEquivariance) {
  std::mt19937_64 rng(29);
  const FeatureMap x = oracle::random_map(9, 11, 3, rng), z = oracle::random_map(9, 11, 3, rng);
  const DcfModel m = train_filter(x, centred_label(9, 11));
  const FeatureMap a = circshift(detect(m, z).response, -4, 5);
  const FeatureMap b = detect(m, circshift(z, -4, 5)).response;
  EXPECT_LT(oracle::max_diff(a, b), 1e-9);
}

TEST(Detect, RejectsShapeMismatch) {
  const DcfModel m = train_filter(FeatureMap(4, 4, 2, 1.0), centred_label(4, 4));
  EXPECT_THROW(detect(m, FeatureMap(4, 4, 3)), std::invalid_argument);
}

TEST(Update, FullAndFrozen) {
  std::mt19937_64 rng(30);
  const FeatureMap a = oracle::random_map(6, 6, 2, rng), b = oracle::random_map(6, 6, 2, rng);
  const GaussianLabel g = centred_label(6, 6);
  const DcfModel m = train_filter(a, g);
  const DcfModel fresh = train_filter(b, g);
  const DcfModel frozen = update_model(m, b, g, 0.0), replaced = update_model(m, b, g, 1.0);
  for (std::size_t i = 0; i < m.numerator.size(); ++i) {
    EXPECT_EQ(frozen.numerator[i], m.numerator[i]);
    EXPECT_EQ(replaced.numerator[i], fresh.numerator[i]);
  }
  for (std::size_t i = 0; i < m.denominator.size(); ++i) {
    EXPECT_EQ(frozen.denominator[i], m.denominator[i]);
    EXPECT_EQ(replaced.denominator[i], fresh.denominator[i]);
  }
  EXPECT_THROW(update_model(m, b, g, -0.1), std::invalid_argument);
  EXPECT_THROW(update_model(m, b, g, 1.1), std::invalid_argument);
}

TEST(Update, ConvexEnvelope) {
  std::mt19937_64 rng(31);
  const GaussianLabel g = centred_label(5, 7);
  const DcfModel m = train_filter(oracle::random_map(5, 7, 3, rng), g);
  const FeatureMap b = oracle::random_map(5, 7, 3, rng);
  const DcfModel fresh = train_filter(b, g);
  const auto inside = [](Complex v, Complex p, Complex q) {
    const double eps = 1e-12 * (1.0 + std::abs(p) + std::abs(q));
    return v.real() >= std::min(p.real(), q.real()) - eps && v.real() <= std::max(p.real(), q.real()) + eps &&
           v.imag() >= std::min(p.imag(), q.imag()) - eps && v.imag() <= std::max(p.imag(), q.imag()) + eps;
  };
  for (double mu : {0.012, 0.3, 0.77}) {
    const DcfModel u = update_model(m, b, g, mu);
    for (std::size_t i = 0; i < u.numerator.size(); ++i)
      EXPECT_TRUE(inside(u.numerator[i], m.numerator[i], fresh.numerator[i]));
    for (std::size_t i = 0; i < u.denominator.size(); ++i)
      EXPECT_TRUE(inside(u.denominator[i], m.denominator[i], fresh.denominator[i]));
  }
}

TEST(Peak, TiesGoToSmallestRowThenColumn) {
  FeatureMap r(4, 4, 1, 0.0);
  r(2, 1) = 5.0;
  r(1, 3) = 5.0;
  r(1, 2) = 5.0;
  const Peak p = find_peak(r);
  EXPECT_EQ(p.row, 1u);
  EXPECT_EQ(p.col, 2u);
}

TEST(Peak, QuadraticRefinement) {
  FeatureMap r(5, 5, 1, 0.0);
  r(2, 2) = 2.0;
  r(2, 1) = 1.0;
  r(2, 3) = 1.5;
  r(1, 2) = 1.0;
  r(3, 2) = 1.0;
  const Peak p = refine_peak(r, find_peak(r));
  EXPECT_NEAR(p.sub_col, 2.0 + 1.0 / 6.0, 1e-12);
  EXPECT_NEAR(p.sub_row, 2.0, 1e-12);
}

TEST(Peak, WrappedOffset) {
  EXPECT_DOUBLE_EQ(wrapped_offset(30.0, 26.0, 52), 4.0);
  EXPECT_DOUBLE_EQ(wrapped_offset(2.0, 26.0, 52), -24.0);
  EXPECT_DOUBLE_EQ(wrapped_offset(51.0, 0.0, 52), -1.0);
  EXPECT_DOUBLE_EQ(wrapped_offset(0.0, 49.0, 52), 3.0);
}

TEST(Scale, FactorsAndTieBreak) {
  const std::vector<double> f = scale_factors(3, 1.0275);
  ASSERT_EQ(f.size(), 3u);
  EXPECT_NEAR(f[0], 1.0 / 1.0275, 1e-15);
  EXPECT_EQ(f[1], 1.0);
  EXPECT_NEAR(f[2], 1.0275, 1e-15);
  std::vector<ScaleCandidate> c(3);
  for (auto& s : c) s.penalized = 1.0;
  EXPECT_EQ(pick_scale(c), 1u);
  c[2].penalized = 1.5;
  EXPECT_EQ(pick_scale(c), 2u);
}

TEST(Config, DcfDefaults) {
  const TrackerConfig c = TrackerConfig::dcf_defaults();
  EXPECT_DOUBLE_EQ(c.mu, 0.012);
  EXPECT_DOUBLE_EQ(c.padding, 1.65);
  EXPECT_EQ(c.scales, 3u);
  EXPECT_EQ(c.crm.k, 50u);
  EXPECT_DOUBLE_EQ(c.lambda_d, 1e-4);
}

class DcfTrackerTest : public ::testing::Test {
 protected:
  SynthOptions opts;
  Image frame_at(Point2 c, double size) const { return render_frame(opts, 3, c, size); }
};

TEST_F(DcfTrackerTest, RepeatedFrameDoesNotDrift) {
  DcfTracker t(TrackerConfig::dcf_defaults());
  const Point2 c{160.0, 150.0};
  const Image f = frame_at(c, 32.0);
  const BoundingBox start = BoundingBox::from_center(c, {32.0, 32.0});
  t.init(f, start);
  EXPECT_EQ(t.channels().size(), 82u);
  for (int i = 0; i < 3; ++i) {
    const BoundingBox b = t.track_frame(f);
    EXPECT_LT(std::hypot(b.center().x - c.x, b.center().y - c.y), 0.5);
    EXPECT_EQ(t.last_scale().index, 1u);
    EXPECT_EQ(t.last_scale().candidates.size(), 3u);
  }
}

TEST_F(DcfTrackerTest, ZoomSequencePicksLargerScale) {
  SynthOptions short_run = opts;
  short_run.frames = 40;
  const auto suite = synthetic_suite(short_run);
  const auto& seq = suite.back();
  ASSERT_EQ(seq.name, "square_zoom");
  DcfTracker t(TrackerConfig::dcf_defaults());
  t.init(seq.frames[0], seq.truth[0]);
  int enlarged = 0, larger = 0, still = 0, spurious = 0;
  for (std::size_t f = 1; f < seq.frames.size(); ++f) {
    t.track_frame(seq.frames[f]);
    const bool grew = seq.scale[f] > seq.scale[f - 1];
    const bool picked_larger = t.last_scale().index == 2;
    (grew ? enlarged : still) += 1;
    (grew ? larger : spurious) += picked_larger ? 1 : 0;
  }
  ASSERT_GT(enlarged, 0);
  EXPECT_GE(3 * larger, 2 * enlarged) << larger << "/" << enlarged;
  EXPECT_LE(10 * spurious, still) << spurious << "/" << still;
  EXPECT_GT(t.geometry().scale, 1.0);
}

TEST_F(DcfTrackerTest, TracksTranslation) {
  DcfTracker t(TrackerConfig::dcf_defaults());
  Point2 c{120.0, 140.0};
  t.init(frame_at(c, 32.0), BoundingBox::from_center(c, {32.0, 32.0}));
  for (int i = 0; i < 5; ++i) {
    c.x += 2.0;
    const BoundingBox b = t.track_frame(frame_at(c, 32.0));
    EXPECT_LT(std::hypot(b.center().x - c.x, b.center().y - c.y), 2.0);
  }
}

TEST_F(DcfTrackerTest, RejectsDegenerateBox) {
  DcfTracker t(TrackerConfig::dcf_defaults());
  const Image f = frame_at({100.0, 100.0}, 32.0);
  EXPECT_THROW(t.init(f, {100.0, 100.0, 1.5, 20.0}), std::invalid_argument);
  EXPECT_THROW(t.init(f, {100.0, 100.0, 20.0, 0.0}), std::invalid_argument);
  EXPECT_THROW(t.init(f, {1000.0, 100.0, 20.0, 20.0}), std::invalid_argument);
  EXPECT_THROW(t.track_frame(f), std::logic_error);
}
