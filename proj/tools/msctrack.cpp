#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>

#include "CLI11.hpp"
#include "json.hpp"
#include "msc/crm.hpp"
#include "msc/eval.hpp"
#include "msc/fft.hpp"
#include "msc/synth.hpp"
#include "msc/trainer.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Globals {
  std::vector<std::string> configs;
  std::string out = "out";
  std::optional<std::uint64_t> seed;
  std::size_t threads = 1;
};

json read_json(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  return json::parse(in);
}

msc::TrackerConfig tracker_config(const Globals& g, std::size_t i) {
  msc::TrackerConfig c = g.configs.empty() ? msc::TrackerConfig::dcf_defaults()
                                           : msc::tracker_config_from_json(read_json(g.configs.at(i)));
  if (g.seed) c.seed = *g.seed;
  return c;
}

std::vector<msc::SequenceSpec> load_all(const std::vector<std::string>& dirs) {
  std::vector<msc::SequenceSpec> out;
  for (const auto& d : dirs) {
    if (fs::exists(fs::path(d) / "groundtruth_rect.txt")) {
      out.push_back(msc::load_sequence(d));
      continue;
    }
    // A root holding several sequences.
    std::vector<fs::path> children;
    for (const auto& e : fs::directory_iterator(d)) {
      if (e.is_directory() && fs::exists(e.path() / "groundtruth_rect.txt")) children.push_back(e.path());
    }
    std::sort(children.begin(), children.end());
    if (children.empty()) throw std::runtime_error("no sequences found under " + d);
    for (const auto& c : children) out.push_back(msc::load_sequence(c));
  }
  return out;
}

void print_report(const msc::TrackerReport& r) {
  std::printf("%-14s DPR %.3f  OSR %.3f  AUC %.3f  CE %.2f px  %.1f fps  (%zu frames, %zu failed)\n",
              r.label.c_str(), r.dpr, r.osr, r.auc, r.mean_center_error, r.fps(), r.frames, r.failed());
  for (const auto& s : r.sequences) {
    if (s.ok) {
      std::printf("  %-20s DPR %.3f  OSR %.3f  AUC %.3f  CE %.2f\n", s.name.c_str(), s.dpr, s.osr, s.auc,
                  s.mean_center_error);
    } else {
      std::printf("  %-20s FAILED: %s\n", s.name.c_str(), s.error.c_str());
    }
  }
}

int run_eval(const Globals& g, const std::vector<std::string>& dirs) {
  const auto seqs = load_all(dirs);
  std::vector<msc::TrackerReport> reports;
  const std::size_t n = std::max<std::size_t>(1, g.configs.size());
  for (std::size_t i = 0; i < n; ++i) {
    reports.push_back(msc::run_ope(tracker_config(g, i), seqs, g.threads));
    print_report(reports.back());
  }
  msc::emit_outputs(reports, g.out);
  return 0;
}

struct TrainFile {
  msc::TrainConfig train;
  std::size_t triplets = 64;
  msc::TripletOptions triplet;
};

TrainFile train_config(const Globals& g) {
  TrainFile t;
  if (!g.configs.empty()) {
    const json j = read_json(g.configs.front());
    for (const auto& [key, value] : j.items()) {
      if (key == "lambda") t.train.lambda = value.get<double>();
      else if (key == "lr") t.train.sgd.learning_rate = value.get<double>();
      else if (key == "momentum") t.train.sgd.momentum = value.get<double>();
      else if (key == "weight_decay") t.train.sgd.weight_decay = value.get<double>();
      else if (key == "epochs") t.train.epochs = value.get<std::size_t>();
      else if (key == "batch") t.train.batch = value.get<std::size_t>();
      else if (key == "triplets") t.triplets = value.get<std::size_t>();
      else if (key == "input_size") t.triplet.input_size = value.get<std::size_t>();
      else if (key == "padding") t.triplet.padding = value.get<double>();
      else if (key == "window") t.train.window = value.get<bool>();
      else throw std::invalid_argument("train config: unknown key '" + key + "'");
    }
  }
  if (g.seed) t.train.seed = t.triplet.seed = *g.seed;
  return t;
}

int run_train(const Globals& g, const std::vector<std::string>& dirs) {
  const TrainFile cfg = train_config(g);
  const auto seqs = load_all(dirs);
  std::vector<msc::Triplet> triplets;
  const std::size_t per = (cfg.triplets + seqs.size() - 1) / seqs.size();
  for (const auto& s : seqs) {
    auto t = msc::make_triplets(s, per, cfg.triplet);
    std::move(t.begin(), t.end(), std::back_inserter(triplets));
  }
  const auto& x = triplets.front().x;
  msc::CompressionHead head =
      msc::CompressionHead::random(x.shallow.channels(), x.deep.channels(), cfg.train.seed);
  const msc::TrainResult result = msc::train_head(head, triplets, cfg.train);
  fs::create_directories(g.out);
  msc::save_head(fs::path(g.out) / "head", result.head);
  std::ofstream loss(fs::path(g.out) / "loss.csv");
  loss << "epoch,mean_loss\n";
  for (std::size_t e = 0; e < result.epoch_loss.size(); ++e) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%zu,%.9g\n", e + 1, result.epoch_loss[e]);
    loss << buf;
  }
  std::printf("trained on %zu triplets: loss %.6g -> %.6g\n", triplets.size(), result.epoch_loss.front(),
              result.epoch_loss.back());
  return 0;
}

int run_crm_inspect(const Globals& g, const std::string& dir) {
  const msc::SequenceSpec seq = msc::load_sequence(dir);
  const msc::TrackerConfig c = tracker_config(g, 0);
  const msc::FeatureExtractor fx(c.feature_options());
  const auto deep = fx.deep_block();
  if (!deep) throw std::invalid_argument("crm-inspect needs msc features");
  const msc::Image frame = msc::load_image(seq.frames.front());
  const msc::BoundingBox& b = seq.ground_truth.front();
  const msc::Size2 crop{b.w * (1.0 + c.padding), b.h * (1.0 + c.padding)};
  const msc::FeatureMap full = fx(frame, b.center(), crop);
  std::vector<std::size_t> idx(deep->size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = deep->begin + i;
  const msc::FeatureMap block = msc::select_channels(full, idx);
  const double n = static_cast<double>(fx.grid());
  const double cells = n / (1.0 + c.padding);
  const double centre = std::floor(n / 2.0);
  const auto region = msc::centered_region(block, centre, centre, cells, cells);
  const auto scores = msc::reliability_scores(block, region, c.crm.eta, c.crm.zeta);
  const auto top = msc::select_top_k(scores, std::min(c.crm.k, scores.size()));
  std::vector<int> rank(scores.size(), 0);
  for (std::size_t i = 0; i < top.size(); ++i) rank[top[i]] = static_cast<int>(i + 1);
  fs::create_directories(g.out);
  std::ofstream out(fs::path(g.out) / "crm.csv");
  out << "channel,ratio,indicator,score,rank\n";
  for (const auto& s : scores) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%zu,%.12g,%d,%.12g,%d\n", s.channel, s.ratio, s.indicator, s.score,
                  rank[s.channel]);
    out << buf;
  }
  std::printf("%zu deep channels scored, %zu selected -> %s\n", scores.size(), top.size(),
              (fs::path(g.out) / "crm.csv").c_str());
  return 0;
}

int run_synth(const Globals& g, std::size_t frames) {
  msc::SynthOptions o;
  o.frames = frames;
  if (g.seed) o.seed = *g.seed;
  for (const auto& s : msc::synthetic_suite(o)) {
    msc::write_sequence(s, g.out);
    std::printf("wrote %s (%zu frames)\n", (fs::path(g.out) / s.name).c_str(), s.frames.size());
  }
  return 0;
}

int run_bench(const Globals& g, std::size_t frames) {
  using clock = std::chrono::steady_clock;
  json report;
  std::mt19937_64 rng(g.seed.value_or(1));
  std::normal_distribution<double> nd;
  for (std::size_t n : {16, 32, 52, 64, 128}) {
    msc::FeatureMap m(n, n, 32);
    for (double& v : m) v = nd(rng);
    const auto t0 = clock::now();
    const int reps = 20;
    for (int i = 0; i < reps; ++i) (void)msc::ifft2(msc::fft2(m));
    const double ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count() / reps;
    report["fft_roundtrip_ms"][std::to_string(n) + "x" + std::to_string(n) + "x32"] = ms;
  }
  msc::SynthOptions o;
  o.frames = frames;
  auto suite = msc::synthetic_suite(o);
  const std::size_t n = std::max<std::size_t>(1, g.configs.size());
  for (std::size_t i = 0; i < n; ++i) {
    const msc::TrackerConfig c = tracker_config(g, i);
    auto tracker = msc::make_tracker(c);
    const auto& seq = suite.front();
    const auto t0 = clock::now();
    tracker->init(seq.frames[0], seq.truth[0]);
    for (std::size_t f = 1; f < seq.frames.size(); ++f) tracker->track_frame(seq.frames[f]);
    const double s = std::chrono::duration<double>(clock::now() - t0).count();
    report["tracking_fps"][msc::default_label(c)] = static_cast<double>(seq.frames.size()) / s;
  }
  fs::create_directories(g.out);
  std::ofstream(fs::path(g.out) / "bench.json") << report.dump(2) << "\n";
  std::cout << report.dump(2) << "\n";
  return 0;
}

int run_track(const Globals& g, const std::string& dir) {
  const std::vector<msc::SequenceSpec> seqs{msc::load_sequence(dir)};
  const msc::TrackerReport r = msc::run_ope(tracker_config(g, 0), seqs, 1);
  print_report(r);
  msc::emit_outputs(std::span(&r, 1), g.out);
  return r.failed() == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-level same-resolution compressed feature correlation tracking"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.configs, "tracker (or training) config JSON; repeat for several trackers")
      ->check(CLI::ExistingFile);
  app.add_option("--out", g.out, "output directory");
  app.add_option("--seed", g.seed, "seed overriding the config");
  app.add_option("--threads", g.threads, "worker threads")->check(CLI::PositiveNumber);

  std::vector<std::string> dirs;
  std::string seq_dir;
  std::size_t frames = 100;

  auto* track = app.add_subcommand("track", "track one OTB-layout sequence");
  track->add_option("sequence", seq_dir, "sequence directory")->required()->check(CLI::ExistingDirectory);
  auto* eval = app.add_subcommand("eval", "one-pass evaluation over sequences");
  eval->add_option("sequences", dirs, "sequence directories or roots")->required()->check(CLI::ExistingDirectory);
  auto* train = app.add_subcommand("train-head", "train the compression head on triplets");
  train->add_option("sequences", dirs, "training sequences")->required()->check(CLI::ExistingDirectory);
  auto* crm = app.add_subcommand("crm-inspect", "dump channel reliability scores for frame 1");
  crm->add_option("sequence", seq_dir, "sequence directory")->required()->check(CLI::ExistingDirectory);
  auto* synth = app.add_subcommand("synth", "write the synthetic sequence suite");
  synth->add_option("--frames", frames, "frames per sequence");
  auto* bench = app.add_subcommand("bench", "timing report");
  bench->add_option("--frames", frames, "frames tracked");
  for (auto* sub : {track, eval, train, crm, synth, bench}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*track) return run_track(g, seq_dir);
    if (*eval) return run_eval(g, dirs);
    if (*train) return run_train(g, dirs);
    if (*crm) return run_crm_inspect(g, seq_dir);
    if (*synth) return run_synth(g, frames);
    if (*bench) return run_bench(g, frames);
  } catch (const std::exception& e) {
    std::cerr << json{{"error", e.what()}}.dump() << "\n";
    return 2;
  }
  return 0;
}
