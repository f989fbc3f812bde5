// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "msc/cco.hpp"
#include "msc/cf_layer.hpp"
#include "msc/crm.hpp"
#include "msc/dcf.hpp"
#include "msc/dcf_tracker.hpp"
#include "msc/eval.hpp"
#include "msc/features.hpp"
#include "msc/fft.hpp"
#include "msc/grad_check.hpp"
#include "msc/synth.hpp"
#include "msc/trainer.hpp"
#include "oracles.hpp"

using namespace msc;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

GaussianLabel centred(std::size_t h, std::size_t w, double sigma = 1.0) {
  return gaussian_label(h, w, static_cast<double>(h / 2), static_cast<double>(w / 2), sigma);
}

std::vector<double> as_vector(const FeatureMap& m) { return {m.begin(), m.end()}; }
FeatureMap from_vector(Shape s, std::span<const double> v) { return FeatureMap(s, std::vector<double>(v.begin(), v.end())); }

// Curves from every evaluation run, checked for monotonicity by criterion 8.
std::vector<EvalCurve> g_precision_curves, g_success_curves;

Outcome ridge_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(1001);
  std::uniform_int_distribution<std::size_t> dim(1, 6), ch(1, 3);
  double worst = 0.0;
  int n = 0;
  for (; n < 120; ++n) {
    const std::size_t h = dim(rng), w = dim(rng), d = ch(rng);
    const FeatureMap x = oracle::random_map(h, w, d, rng);
    const GaussianLabel g = centred(h, w);
    const double lambda = n % 2 ? kDefaultLambdaD : 1e-2;
    const FeatureMap got = ifft2(train_filter(x, g, lambda).filter());
    worst = std::max(worst, oracle::relative_diff(got, oracle::ridge_filter(x, g.values, lambda)));
  }
  const double s = elapsed(t0);
  return {worst < 1e-8 && s < 10.0, fmt("%d instances up to 6x6x3, worst relative error %.2e (tol 1e-8)", n, worst), s};
}

Outcome detection_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(1002);
  std::uniform_int_distribution<std::size_t> dim(1, 16), ch(1, 4);
  double worst = 0.0;
  int n = 0;
  for (; n < 120; ++n) {
    const std::size_t h = dim(rng), w = dim(rng), d = ch(rng);
    const FeatureMap x = oracle::random_map(h, w, d, rng), z = oracle::random_map(h, w, d, rng);
    const DcfModel m = train_filter(x, centred(h, w));
    const FeatureMap want = oracle::correlate(ifft2(m.filter()), z);
    worst = std::max(worst, oracle::relative_diff(detect(m, z).response, want));
  }
  const double s = elapsed(t0);
  return {worst < 1e-9 && s < 10.0, fmt("%d instances up to 16x16x4, worst relative error %.2e (tol 1e-9)", n, worst), s};
}

Outcome gradients() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(1003);
  std::uniform_int_distribution<std::size_t> dim(2, 8), ch(1, 4);
  double worst = 0.0, worst_coarse = 0.0;
  int n = 0;
  for (; n < 60; ++n) {
    const std::size_t h = dim(rng), w = dim(rng), d = ch(rng);
    const FeatureMap x = oracle::random_map(h, w, d, rng), z = oracle::random_map(h, w, d, rng);
    const GaussianLabel g = centred(h, w);
    const CfForward fwd = cf_forward(x, z, g);
    const CfGrad grad = cf_backward(fwd.tape, cf_loss_upstream(fwd, g));
    const auto fx = [&](std::span<const double> v) { return cf_forward(from_vector(x.shape(), v), z, g).loss; };
    const auto fz = [&](std::span<const double> v) { return cf_forward(x, from_vector(z.shape(), v), g).loss; };
    for (double eps : {1e-4, 1e-3}) {
      const double e = std::max(grad_check(fx, as_vector(x), as_vector(grad.d_phi_x), eps).max_relative_error,
                                grad_check(fz, as_vector(z), as_vector(grad.d_phi_z), eps).max_relative_error);
      (eps == 1e-4 ? worst : worst_coarse) = std::max(eps == 1e-4 ? worst : worst_coarse, e);
    }
  }
  // Head parameters through resampling, 1x1 compression, LRN, window and the CF layer.
  double worst_head = 0.0, worst_head_coarse = 0.0, worst_head_grad = 0.0, worst_head_loss = 0.0;
  int heads = 0;
  std::uniform_int_distribution<std::size_t> hc(1, 4);
  for (; heads < 10; ++heads) {
    const std::size_t cs = hc(rng), cd = hc(rng);
    Triplet t;
    t.x = resample_branches(oracle::random_map(21, 21, cs, rng), oracle::random_map(2, 2, cd, rng));
    t.z = resample_branches(oracle::random_map(21, 21, cs, rng), oracle::random_map(2, 2, cd, rng));
    t.g = gaussian_label(8, 8, 4, 4, 1.0);
    const CompressionHead head = CompressionHead::random(cs, cd, 100 + heads);
    const FeatureMap window = hann_window(8, 8);
    const FeatureMap* taper = heads % 2 ? &window : nullptr;
    const TripletLoss tl = triplet_loss(t, head, kDefaultCfLambda, taper);
    const auto fn = [&](std::span<const double> p) {
      CompressionHead hd = head;
      unflatten_params(hd, p);
      return triplet_loss(t, hd, kDefaultCfLambda, taper).loss;
    };
    const GradCheckResult fine = grad_check(fn, flatten_params(head), flatten_grad(tl.grad), 1e-4);
    if (fine.max_relative_error > worst_head) {
      worst_head = fine.max_relative_error;
      worst_head_grad = fine.analytic;
      worst_head_loss = tl.loss;
    }
    worst_head_coarse =
        std::max(worst_head_coarse, grad_check(fn, flatten_params(head), flatten_grad(tl.grad), 1e-3).max_relative_error);
  }
  const double s = elapsed(t0);
  return {worst < 1e-4 && worst_head < 1e-4 && s < 60.0,
          fmt("%d CF trials up to 8x8x4 + %d head trials at eps 1e-4: worst phi %.2e, head %.2e (tol 1e-4; "
              "worst head entry has gradient %.2e at loss %.2f); eps 1e-3 for reference: phi %.2e, head %.2e",
              n, heads, worst, worst_head, worst_head_grad, worst_head_loss, worst_coarse, worst_head_coarse),
          s};
}

Outcome training() {
  const auto t0 = std::chrono::steady_clock::now();
  SynthOptions o;
  o.frames = 30;
  const auto suite = synthetic_suite(o);
  const auto triplets = make_triplets(suite[0].frames, suite[0].truth, 16, TripletOptions{});
  TrainConfig tc;
  tc.epochs = 50;
  tc.batch = 16;
  tc.sgd.learning_rate = 0.3;
  const TrainResult r =
      train_head(CompressionHead::random(ProxyBackbone::kShallowChannels, ProxyBackbone::kDeepChannels, 1), triplets, tc);
  const double ratio = r.epoch_loss.back() / r.epoch_loss.front();
  const double s = elapsed(t0);
  return {ratio <= 0.5 && s < 300.0,
          fmt("%s: 16 triplets, 50 epochs, lr 0.3: loss %.3f -> %.3f, ratio %.3f (need <= 0.5)", suite[0].name.c_str(),
              r.epoch_loss.front(), r.epoch_loss.back(), ratio),
          s};
}

Outcome crm() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(1005);
  std::uniform_int_distribution<std::size_t> dim(4, 12), ch(2, 12);
  std::uniform_real_distribution<double> dens(0.05, 1.0);
  double worst = 0.0;
  bool order_ok = true, indicator_ok = true;
  int n = 0;
  for (; n < 200; ++n) {
    const std::size_t h = dim(rng), w = dim(rng), d = ch(rng);
    FeatureMap m = oracle::random_map(h, w, d, rng);
    std::bernoulli_distribution keep(dens(rng));
    for (double& v : m)
      if (!keep(rng)) v = 0.0;
    const std::size_t th = 1 + rng() % h, tw = 1 + rng() % w;
    const TargetRegion reg{rng() % (h - th + 1), rng() % (w - tw + 1), th, tw};
    const auto got = reliability_scores(m, reg);
    std::vector<double> c(d);
    for (std::size_t l = 0; l < d; ++l) {
      double all = 0.0, inside = 0.0;
      std::size_t z = 0;
      for (std::size_t r = 0; r < h; ++r)
        for (std::size_t q = 0; q < w; ++q) {
          const double v = std::abs(m(r, q, l));
          all += v;
          if (r >= reg.row && r < reg.row + th && q >= reg.col && q < reg.col + tw) {
            inside += v;
            z += v > 1e-12;
          }
        }
      const int a = static_cast<double>(z) > static_cast<double>(th * tw) / 3.0;
      c[l] = inside / (all + 1e-5) * a;
      indicator_ok = indicator_ok && got[l].indicator == a;
      worst = std::max({worst, std::abs(got[l].ratio - inside / (all + 1e-5)), std::abs(got[l].score - c[l])});
    }
    std::vector<std::size_t> sorted(d);
    std::iota(sorted.begin(), sorted.end(), 0);
    std::stable_sort(sorted.begin(), sorted.end(), [&](std::size_t a, std::size_t b) { return c[a] > c[b]; });
    const std::size_t k = 1 + rng() % d;
    order_ok = order_ok && select_top_k(got, k) == std::vector<std::size_t>(sorted.begin(), sorted.begin() + k);
  }
  const TrackerConfig dc = tracker_config_from_json(nlohmann::json{{"tracker", "dcf"}});
  const TrackerConfig cc = tracker_config_from_json(nlohmann::json{{"tracker", "cco"}});
  const bool defaults = dc.crm.k == 50 && cc.crm.k == 58 && dc.crm.eta == 3.0 && cc.crm.eta == 3.0 &&
                        dc.crm.zeta == 1e-5 && cc.crm.zeta == 1e-5;
  const double s = elapsed(t0);
  return {worst <= 1e-12 && order_ok && indicator_ok && defaults,
          fmt("%d maps: worst |R|,|C| error %.1e (tol 1e-12), indicators %s, top-K vs sort %s, "
              "config defaults K=%zu/%zu eta=%g zeta=%g",
              n, worst, indicator_ok ? "exact" : "MISMATCH", order_ok ? "identical" : "MISMATCH", dc.crm.k, cc.crm.k,
              dc.crm.eta, dc.crm.zeta),
          s};
}

double bspline(double t) {
  const double a = std::abs(t);
  if (a >= 2.0) return 0.0;
  if (a >= 1.0) return (2.0 - a) * (2.0 - a) * (2.0 - a) / 6.0;
  return (4.0 - 6.0 * a * a + 3.0 * a * a * a) / 6.0;
}

Outcome cco_vs_dcf() {
  const auto t0 = std::chrono::steady_clock::now();
  SynthOptions o;
  o.frames = 60;
  const auto suite = synthetic_suite(o);
  FeatureExtractor ex(FeatureOptions{});
  const std::size_t n = ex.grid();
  const double padding = 1.65;
  const FeatureMap window = hann_window(n, n);
  std::mt19937_64 rng(1006);
  std::uniform_real_distribution<double> off(-6.0, 6.0);
  int agree = 0, trials = 0;
  for (; trials < 100; ++trials) {
    const auto& seq = suite[trials % 4];
    const std::size_t f = rng() % (seq.frames.size() - 1);
    const BoundingBox b = seq.truth[f];
    const Size2 crop{b.w * (1.0 + padding), b.h * (1.0 + padding)};
    const Point2 cz{seq.truth[f + 1].center().x + off(rng), seq.truth[f + 1].center().y + off(rng)};
    const FeatureMap x = apply_window(ex(seq.frames[f], b.center(), crop), window);
    const FeatureMap z = apply_window(ex(seq.frames[f + 1], cz, crop), window);
    const double cells = static_cast<double>(n) / (1.0 + padding);
    const GaussianLabel g = centred(n, n, default_label_sigma(cells, cells));
    const Peak dp = detect(train_filter(x, g), z).peak;
    const CcoFilter cf = train_cco_filter(interpolated_spectrum(x, InterpKernel::ideal()), g, kDefaultLambdaD, {},
                                          InterpKernel::ideal());
    const SubpixelPeak cp = localize_subpixel(confidence_map(cf, z, 1), 1);
    agree += cp.cell_row == dp.row && cp.cell_col == dp.col;
  }
  // Interpolation against direct periodised summation.
  double interp = 0.0;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 50; ++t) {
    const std::size_t h = 2 + rng() % 10, w = 2 + rng() % 10;
    const FeatureMap m = oracle::random_map(h, w, 1, rng);
    const double pr = u(rng) * 7.0, pc = u(rng) * 3.0;
    double want = 0.0;
    for (std::size_t r = 0; r < h; ++r)
      for (std::size_t c = 0; c < w; ++c) {
        double br = 0.0, bc = 0.0;
        for (long k = -3; k <= 3; ++k) {
          br += bspline(pr * h / 7.0 - r + static_cast<double>(k * static_cast<long>(h)));
          bc += bspline(pc * w / 3.0 - c + static_cast<double>(k * static_cast<long>(w)));
        }
        want += m(r, c) * br * bc;
      }
    interp = std::max(interp, std::abs(interpolate_channel(m, 0, InterpKernel::cubic_bspline(), pr, pc, 7.0, 3.0) - want));
  }
  const double s = elapsed(t0);
  return {agree == trials && interp <= 1e-10,
          fmt("same peak cell in %d/%d trials on %zux%zux%zu MSC features; interpolation vs direct sum worst %.1e "
              "(tol 1e-10)",
              agree, trials, n, n, ex.channels(), interp),
          s};
}

Outcome synthetic_tracking() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto suite = synthetic_suite(SynthOptions{});
  std::vector<EvalCurve> succ, prec;
  std::string per;
  double ce_sum = 0.0;
  bool ce_ok = true;
  int enlarged = 0, larger = 0, still = 0, spurious = 0;
  for (const auto& seq : suite) {
    DcfTracker t(TrackerConfig::dcf_defaults());
    std::vector<BoundingBox> boxes{seq.truth[0]};
    t.init(seq.frames[0], seq.truth[0]);
    for (std::size_t f = 1; f < seq.frames.size(); ++f) {
      boxes.push_back(t.track_frame(seq.frames[f]));
      if (seq.name == "square_zoom") {
        const bool grew = seq.scale[f] > seq.scale[f - 1];
        const bool picked = t.last_scale().index == 2;
        (grew ? enlarged : still) += 1;
        (grew ? larger : spurious) += picked;
      }
    }
    const SequenceResult r = score_sequence(seq.name, boxes, seq.truth);
    succ.push_back(r.success);
    prec.push_back(r.precision);
    ce_sum += r.mean_center_error;
    ce_ok = ce_ok && r.mean_center_error < 2.0;
    per += fmt(" %s ce=%.2f auc=%.3f;", seq.name.c_str(), r.mean_center_error, r.auc);
  }
  g_success_curves.insert(g_success_curves.end(), succ.begin(), succ.end());
  g_precision_curves.insert(g_precision_curves.end(), prec.begin(), prec.end());
  const double agg_auc = auc(mean_curve(succ));
  const double mean_ce = ce_sum / static_cast<double>(suite.size());
  const bool zoom_ok = enlarged > 0 && 3 * larger >= 2 * enlarged && 10 * spurious <= still;
  const double s = elapsed(t0);
  return {ce_ok && agg_auc > 0.8 && zoom_ok && s < 120.0,
          fmt("MSC-DCF on 5x%zu frames: mean ce %.2f px (each < 2), aggregate AUC %.3f (> 0.8); zoom: larger scale "
              "on %d/%d enlargements (>= 2/3), %d/%d static frames (<= 1/10);",
              suite.front().frames.size(), mean_ce, agg_auc, larger, enlarged, spurious, still) +
              per,
          s};
}

Outcome metrics() {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  const BoundingBox a{3, 4, 5, 6};
  ok = ok && iou(a, a) == 1.0 && center_error(a, a) == 0.0;
  std::vector<FrameRecord> perfect(10, FrameRecord{a, a});
  ok = ok && auc(success_curve(perfect)) == 1.0 && dpr(precision_curve(perfect)) == 1.0 &&
       osr(success_curve(perfect)) == 1.0;
  const double seventh = iou({0, 0, 2, 2}, {1, 1, 2, 2});
  const double root2 = center_error({0, 0, 2, 2}, {1, 1, 2, 2});
  ok = ok && std::abs(seventh - 1.0 / 7.0) < 1e-15 && std::abs(root2 - std::sqrt(2.0)) < 1e-15;
  EvalCurve lin{success_thresholds(), {}};
  for (double t : lin.thresholds) lin.values.push_back(1.0 - t);
  ok = ok && std::abs(auc(lin) - 0.5) < 1e-12;
  for (std::size_t i : {2u, 5u, 9u}) perfect[i].predicted.x += 500.0;
  ok = ok && std::abs(osr(success_curve(perfect)) - 0.7) < 1e-15;
  std::size_t monotone = 0;
  for (const auto& c : g_precision_curves) monotone += nondecreasing(c);
  for (const auto& c : g_success_curves) monotone += nonincreasing(c);
  const std::size_t total = g_precision_curves.size() + g_success_curves.size();
  const double s = elapsed(t0);
  return {ok && monotone == total && total > 0,
          fmt("hand cases %s (identity 1/0/1, IoU %.6f = 1/7, ce %.6f = sqrt 2, linear AUC 0.5, OSR 0.7); "
              "%zu/%zu curves from the runs above monotone",
              ok ? "match" : "MISMATCH", seventh, root2, monotone, total),
          s};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  const auto t0 = std::chrono::steady_clock::now();
  const fs::path root = fs::temp_directory_path() / "msc_acceptance_determinism";
  fs::remove_all(root);
  SynthOptions o;
  o.frames = 12;
  const auto suite = synthetic_suite(o);
  std::vector<SequenceSpec> specs{write_sequence(suite[0], root / "data"), write_sequence(suite[4], root / "data")};
  const TrackerConfig cco = TrackerConfig::cco_defaults();
  TrackerConfig hog = TrackerConfig::dcf_defaults();
  hog.features = FeatureKind::Hog;
  std::vector<fs::path> dirs{root / "run1", root / "run2"};
  for (const auto& dir : dirs) {
    std::vector<TrackerReport> reports{run_ope(TrackerConfig::dcf_defaults(), specs, 1), run_ope(cco, specs, 1),
                                       run_ope(hog, specs, 1, "dcf-hog")};
    for (const auto& r : reports) {
      g_precision_curves.push_back(r.precision);
      g_success_curves.push_back(r.success);
    }
    emit_outputs(reports, dir);
  }
  std::size_t files = 0, same = 0;
  for (const auto& e : fs::recursive_directory_iterator(dirs[0])) {
    if (!e.is_regular_file() || e.path().filename() == "timing.json") continue;
    ++files;
    same += slurp(e.path()) == slurp(dirs[1] / fs::relative(e.path(), dirs[0]));
  }
  fs::remove_all(root);
  const double s = elapsed(t0);
  return {files > 0 && same == files,
          fmt("two run_ope + emit_outputs passes (3 trackers, 2 sequences): %zu/%zu CSV/JSON/SVG files byte-identical",
              same, files),
          s};
}

}  // namespace

int main() {
  const std::vector<std::pair<int, std::function<Outcome()>>> order{
      {1, ridge_oracle}, {2, detection_oracle}, {3, gradients},          {4, training}, {5, crm},
      {6, cco_vs_dcf},   {7, synthetic_tracking}, {9, determinism},       {8, metrics}};
  std::vector<Outcome> results(10);
  for (const auto& [id, fn] : order) {
    std::fprintf(stderr, "running criterion %d...\n", id);
    try {
      results[id] = fn();
    } catch (const std::exception& e) {
      results[id] = {false, std::string("exception: ") + e.what(), 0.0};
    }
  }
  bool all = true;
  for (int id = 1; id <= 9; ++id) {
    const Outcome& r = results[id];
    all = all && r.pass;
    std::printf("Criterion %d: %s  %s (%.1f s)\n", id, r.pass ? "PASS" : "FAIL", r.detail.c_str(), r.seconds);
  }
  return all ? 0 : 1;
}
