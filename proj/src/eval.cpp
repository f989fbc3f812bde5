#include "msc/eval.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <thread>

namespace msc {

double iou(const BoundingBox& a, const BoundingBox& b) {
  const double ix = std::max(0.0, std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x));
  const double iy = std::max(0.0, std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y));
  const double inter = ix * iy;
  const double uni = a.w * a.h + b.w * b.h - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

double center_error(const BoundingBox& a, const BoundingBox& b) {
  const Point2 ca = a.center(), cb = b.center();
  return std::hypot(ca.x - cb.x, ca.y - cb.y);
}

std::vector<double> precision_thresholds() {
  std::vector<double> t(51);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = static_cast<double>(i);
  return t;
}

std::vector<double> success_thresholds() {
  std::vector<double> t(21);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = static_cast<double>(i) / 20.0;
  return t;
}

namespace {

void require_records(std::span<const FrameRecord> records) {
  if (records.empty()) throw std::invalid_argument("evaluation: empty record set");
}

// Comparisons against a threshold grid tolerate rounding in the grid itself.
constexpr double kThresholdSlack = 1e-12;

}  // namespace

EvalCurve precision_curve(std::span<const FrameRecord> records) {
  require_records(records);
  EvalCurve c{precision_thresholds(), {}};
  for (double t : c.thresholds) {
    std::size_t pass = 0;
    for (const auto& r : records) pass += center_error(r.predicted, r.truth) <= t + kThresholdSlack ? 1 : 0;
    c.values.push_back(static_cast<double>(pass) / static_cast<double>(records.size()));
  }
  return c;
}

EvalCurve success_curve(std::span<const FrameRecord> records) {
  require_records(records);
  EvalCurve c{success_thresholds(), {}};
  for (double t : c.thresholds) {
    std::size_t pass = 0;
    for (const auto& r : records) pass += iou(r.predicted, r.truth) >= t - kThresholdSlack ? 1 : 0;
    c.values.push_back(static_cast<double>(pass) / static_cast<double>(records.size()));
  }
  return c;
}

double auc(const EvalCurve& success) {
  if (success.values.empty()) throw std::invalid_argument("auc: empty curve");
  double s = 0.0;
  for (double v : success.values) s += v;
  return s / static_cast<double>(success.values.size());
}

double curve_value(const EvalCurve& curve, double threshold) {
  for (std::size_t i = 0; i < curve.thresholds.size(); ++i) {
    if (std::abs(curve.thresholds[i] - threshold) < 1e-9) return curve.values[i];
  }
  throw std::invalid_argument("curve_value: threshold not on the grid");
}

double dpr(const EvalCurve& precision) { return curve_value(precision, 20.0); }
double osr(const EvalCurve& success) { return curve_value(success, 0.5); }

bool nondecreasing(const EvalCurve& curve) {
  return std::is_sorted(curve.values.begin(), curve.values.end());
}

bool nonincreasing(const EvalCurve& curve) {
  return std::is_sorted(curve.values.rbegin(), curve.values.rend());
}

EvalCurve mean_curve(std::span<const EvalCurve> curves) {
  if (curves.empty()) throw std::invalid_argument("mean_curve: no curves");
  EvalCurve out{curves[0].thresholds, std::vector<double>(curves[0].values.size(), 0.0)};
  for (const auto& c : curves) {
    if (c.thresholds != out.thresholds) throw std::invalid_argument("mean_curve: threshold grids differ");
    for (std::size_t i = 0; i < c.values.size(); ++i) out.values[i] += c.values[i];
  }
  for (double& v : out.values) v /= static_cast<double>(curves.size());
  return out;
}

std::size_t TrackerReport::failed() const {
  return static_cast<std::size_t>(std::count_if(sequences.begin(), sequences.end(), [](const auto& s) { return !s.ok; }));
}

std::string default_label(const TrackerConfig& config) {
  std::string f = to_string(config.features);
  std::replace(f.begin(), f.end(), '+', '_');
  return to_string(config.tracker) + "-" + f;
}

SequenceResult score_sequence(std::string name, std::span<const BoundingBox> predicted,
                              std::span<const BoundingBox> truth) {
  if (predicted.size() != truth.size()) throw std::invalid_argument("score_sequence: length mismatch");
  SequenceResult r;
  r.name = std::move(name);
  for (std::size_t i = 0; i < predicted.size(); ++i) r.records.push_back({predicted[i], truth[i]});
  r.precision = precision_curve(r.records);
  r.success = success_curve(r.records);
  r.dpr = dpr(r.precision);
  r.osr = osr(r.success);
  r.auc = auc(r.success);
  double ce = 0.0;
  for (const auto& rec : r.records) ce += center_error(rec.predicted, rec.truth);
  r.mean_center_error = ce / static_cast<double>(r.records.size());
  r.ok = true;
  return r;
}

namespace {

SequenceResult track_sequence(const TrackerConfig& config, const SequenceSpec& seq) {
  using clock = std::chrono::steady_clock;
  try {
    auto tracker = make_tracker(config);
    std::vector<BoundingBox> boxes;
    boxes.reserve(seq.frames.size());
    double seconds = 0.0;
    for (std::size_t i = 0; i < seq.frames.size(); ++i) {
      const Image frame = load_image(seq.frames[i]);
      const auto t0 = clock::now();
      if (i == 0) {
        tracker->init(frame, seq.ground_truth[0]);
        boxes.push_back(seq.ground_truth[0]);
      } else {
        boxes.push_back(tracker->track_frame(frame));
      }
      seconds += std::chrono::duration<double>(clock::now() - t0).count();
    }
    SequenceResult r = score_sequence(seq.name, boxes, seq.ground_truth);
    r.seconds = seconds;
    return r;
  } catch (const std::exception& e) {
    SequenceResult r;
    r.name = seq.name;
    r.ok = false;
    r.error = e.what();
    return r;
  }
}

}  // namespace

TrackerReport run_ope(const TrackerConfig& config, std::span<const SequenceSpec> sequences, std::size_t threads,
                      std::string label) {
  config.validate();
  TrackerReport report;
  report.label = label.empty() ? default_label(config) : std::move(label);
  report.config = config;
  report.sequences.resize(sequences.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < sequences.size(); i = next++) {
      report.sequences[i] = track_sequence(config, sequences[i]);
    }
  };
  const std::size_t n = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(1, sequences.size()));
  std::vector<std::jthread> pool;
  for (std::size_t t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  pool.clear();

  std::vector<EvalCurve> prec, succ;
  double ce = 0.0;
  for (const auto& s : report.sequences) {
    if (!s.ok) continue;
    prec.push_back(s.precision);
    succ.push_back(s.success);
    ce += s.mean_center_error;
    report.frames += s.records.size();
    report.seconds += s.seconds;
  }
  if (!prec.empty()) {
    report.precision = mean_curve(prec);
    report.success = mean_curve(succ);
    report.dpr = dpr(report.precision);
    report.osr = osr(report.success);
    report.auc = auc(report.success);
    report.mean_center_error = ce / static_cast<double>(prec.size());
  }
  return report;
}

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  return out;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

void write_plot(const std::filesystem::path& path, std::span<const TrackerReport> reports, bool precision) {
  static const char* colors[] = {"#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};
  const double w = 480, h = 360, left = 60, right = 20, top = 30, bottom = 50;
  const double pw = w - left - right, ph = h - top - bottom;
  const double xmax = precision ? 50.0 : 1.0;
  auto out = open_out(path);
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" viewBox=\"0 0 " << w
      << " " << h << "\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << w / 2 << "\" y=\"20\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">"
      << (precision ? "Precision plots of OPE" : "Success plots of OPE") << "</text>\n";
  out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double fx = i / 5.0;
    const double x = left + fx * pw, y = top + ph - fx * ph;
    out << "<text x=\"" << x << "\" y=\"" << top + ph + 16 << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        << "font-size=\"10\">" << fmt(fx * xmax).substr(0, precision ? 2 : 3) << "</text>\n";
    out << "<text x=\"" << left - 6 << "\" y=\"" << y + 3 << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
        << "font-size=\"10\">" << fmt(fx).substr(0, 3) << "</text>\n";
  }
  out << "<text x=\"" << left + pw / 2 << "\" y=\"" << h - 12 << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "font-size=\"12\">" << (precision ? "Location error threshold (px)" : "Overlap threshold") << "</text>\n";
  for (std::size_t k = 0; k < reports.size(); ++k) {
    const EvalCurve& c = precision ? reports[k].precision : reports[k].success;
    if (c.values.empty()) continue;
    out << "<polyline fill=\"none\" stroke=\"" << colors[k % 6] << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < c.values.size(); ++i) {
      out << (i ? " " : "") << fmt(left + c.thresholds[i] / xmax * pw) << "," << fmt(top + ph - c.values[i] * ph);
    }
    out << "\"/>\n";
    const double score = precision ? reports[k].dpr : reports[k].auc;
    out << "<text x=\"" << left + pw - 8 << "\" y=\"" << top + 16 + 14 * k << "\" text-anchor=\"end\" "
        << "font-family=\"sans-serif\" font-size=\"11\" fill=\"" << colors[k % 6] << "\">"
        << xml_escape(reports[k].label) << " [" << fmt(score).substr(0, 5) << "]</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace

nlohmann::json summary_json(std::span<const TrackerReport> reports) {
  nlohmann::json j;
  j["trackers"] = nlohmann::json::array();
  for (const auto& r : reports) {
    nlohmann::json t;
    t["label"] = r.label;
    t["config"] = to_json(r.config);
    t["aggregate"] = {{"dpr", r.dpr}, {"osr", r.osr}, {"auc", r.auc}, {"mean_center_error", r.mean_center_error},
                      {"frames", r.frames}, {"failed_sequences", r.failed()}};
    t["sequences"] = nlohmann::json::array();
    for (const auto& s : r.sequences) {
      nlohmann::json q{{"name", s.name}, {"ok", s.ok}};
      if (s.ok) {
        q["frames"] = s.records.size();
        q["dpr"] = s.dpr;
        q["osr"] = s.osr;
        q["auc"] = s.auc;
        q["mean_center_error"] = s.mean_center_error;
      } else {
        q["error"] = s.error;
      }
      t["sequences"].push_back(q);
    }
    j["trackers"].push_back(t);
  }
  return j;
}

void emit_outputs(std::span<const TrackerReport> reports, const std::filesystem::path& dir) {
  if (reports.empty()) throw std::invalid_argument("emit_outputs: empty report");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());

  {
    auto out = open_out(dir / "curves.csv");
    out << "tracker,curve,threshold,value\n";
    for (const auto& r : reports) {
      for (std::size_t i = 0; i < r.precision.values.size(); ++i) {
        out << r.label << ",precision," << fmt(r.precision.thresholds[i]) << "," << fmt(r.precision.values[i]) << "\n";
      }
      for (std::size_t i = 0; i < r.success.values.size(); ++i) {
        out << r.label << ",success," << fmt(r.success.thresholds[i]) << "," << fmt(r.success.values[i]) << "\n";
      }
    }
  }
  open_out(dir / "summary.json") << summary_json(reports).dump(2) << "\n";

  nlohmann::json timing;
  timing["trackers"] = nlohmann::json::array();
  for (const auto& r : reports) {
    nlohmann::json t{{"label", r.label}, {"fps", r.fps()}, {"seconds", r.seconds}, {"frames", r.frames}};
    t["sequences"] = nlohmann::json::array();
    for (const auto& s : r.sequences) {
      t["sequences"].push_back({{"name", s.name}, {"fps", s.fps()}, {"seconds", s.seconds}});
    }
    timing["trackers"].push_back(t);
  }
  open_out(dir / "timing.json") << timing.dump(2) << "\n";

  write_plot(dir / "precision.svg", reports, true);
  write_plot(dir / "success.svg", reports, false);

  for (const auto& r : reports) {
    const auto box_dir = dir / "boxes" / r.label;
    std::filesystem::create_directories(box_dir, ec);
    if (ec) throw std::runtime_error("cannot create " + box_dir.string());
    for (const auto& s : r.sequences) {
      if (!s.ok) continue;
      auto out = open_out(box_dir / (s.name + ".csv"));
      out << "frame,x,y,w,h,iou,center_error\n";
      for (std::size_t i = 0; i < s.records.size(); ++i) {
        const auto& b = s.records[i].predicted;
        out << i + 1 << "," << fmt(b.x) << "," << fmt(b.y) << "," << fmt(b.w) << "," << fmt(b.h) << ","
            << fmt(iou(b, s.records[i].truth)) << "," << fmt(center_error(b, s.records[i].truth)) << "\n";
      }
    }
  }
}

}  // namespace msc
