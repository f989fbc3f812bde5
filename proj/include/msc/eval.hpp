#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "msc/sequence.hpp"
#include "msc/tracker.hpp"

namespace msc {

double iou(const BoundingBox& a, const BoundingBox& b);
double center_error(const BoundingBox& a, const BoundingBox& b);

struct FrameRecord {
  BoundingBox predicted;
  BoundingBox truth;
};

struct EvalCurve {
  std::vector<double> thresholds;
  std::vector<double> values;
};

std::vector<double> precision_thresholds();  // 0, 1, ..., 50 px
std::vector<double> success_thresholds();    // 0, 0.05, ..., 1

// Fraction of frames with centre error <= t.
EvalCurve precision_curve(std::span<const FrameRecord> records);
// Fraction of frames with IoU >= t.
EvalCurve success_curve(std::span<const FrameRecord> records);

double auc(const EvalCurve& success);
double dpr(const EvalCurve& precision);  // at 20 px
double osr(const EvalCurve& success);    // at 0.5
double curve_value(const EvalCurve& curve, double threshold);
bool nondecreasing(const EvalCurve& curve);
bool nonincreasing(const EvalCurve& curve);

// Element-wise mean of curves sharing a threshold grid.
EvalCurve mean_curve(std::span<const EvalCurve> curves);

struct SequenceResult {
  std::string name;
  bool ok = false;
  std::string error;
  std::vector<FrameRecord> records;
  EvalCurve precision;
  EvalCurve success;
  double dpr = 0.0;
  double osr = 0.0;
  double auc = 0.0;
  double mean_center_error = 0.0;
  double seconds = 0.0;  // init + tracking, excluding frame decoding
  double fps() const { return seconds > 0.0 ? static_cast<double>(records.size()) / seconds : 0.0; }
};

struct TrackerReport {
  std::string label;
  TrackerConfig config;
  std::vector<SequenceResult> sequences;
  EvalCurve precision;  // mean over successful sequences
  EvalCurve success;
  double dpr = 0.0;
  double osr = 0.0;
  double auc = 0.0;
  double mean_center_error = 0.0;
  std::size_t frames = 0;
  double seconds = 0.0;
  double fps() const { return seconds > 0.0 ? static_cast<double>(frames) / seconds : 0.0; }
  std::size_t failed() const;
};

std::string default_label(const TrackerConfig& config);

// Score a trajectory against ground truth.
SequenceResult score_sequence(std::string name, std::span<const BoundingBox> predicted,
                              std::span<const BoundingBox> truth);

// One-pass evaluation: init on frame 1 ground truth, track to the end.
// Sequences are processed on up to `threads` workers; a failing sequence is
// recorded with its error and the rest continue.
TrackerReport run_ope(const TrackerConfig& config, std::span<const SequenceSpec> sequences, std::size_t threads = 1,
                      std::string label = {});

// Writes curves.csv, summary.json, timing.json, precision.svg, success.svg and
// boxes/<label>/<sequence>.csv. Everything except timing.json depends only on
// configuration and inputs.
void emit_outputs(std::span<const TrackerReport> reports, const std::filesystem::path& dir);

nlohmann::json summary_json(std::span<const TrackerReport> reports);

}  // namespace msc
