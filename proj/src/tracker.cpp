#include "msc/tracker.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

#include "msc/cco_tracker.hpp"
#include "msc/dcf_tracker.hpp"

namespace msc {

TrackerConfig TrackerConfig::dcf_defaults() { return TrackerConfig{}; }

TrackerConfig TrackerConfig::cco_defaults() {
  TrackerConfig c;
  c.tracker = TrackerKind::Cco;
  c.mu = 9.4e-3;
  c.padding = 3.62;
  c.crm.k = kDefaultCcoTopK;
  return c;
}

FeatureOptions TrackerConfig::feature_options() const {
  FeatureOptions o;
  o.kind = features;
  o.grid = grid;
  o.hog_cell = hog_cell;
  o.msc_input = msc_input;
  o.head = head;
  o.seed = seed;
  return o;
}

void TrackerConfig::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("tracker config: " + what); };
  if (!(lambda_d > 0.0)) fail("lambda_d must be positive");
  if (!(lambda_c > 0.0)) fail("lambda_c must be positive");
  if (!(mu >= 0.0 && mu <= 1.0)) fail("mu must lie in [0, 1]");
  if (!(padding > 0.0)) fail("padding must be positive");
  if (scales == 0 || scales % 2 == 0) fail("scales must be odd and positive");
  if (!(scale_step >= 1.0)) fail("scale_step must be >= 1");
  if (!(scale_penalty > 0.0 && scale_penalty <= 1.0)) fail("scale_penalty must lie in (0, 1]");
  if (crm.k == 0) fail("crm.k must be positive");
  if (!(crm.eta > 0.0) || !(crm.zeta > 0.0)) fail("crm.eta and crm.zeta must be positive");
  if (grid_factor == 0) fail("grid_factor must be >= 1");
  if (kernel != "bspline" && kernel != "linear" && kernel != "ideal") fail("unknown kernel '" + kernel + "'");
  if (pca_dims == 0) fail("pca_dims must be positive");
  if (!(sigma_factor > 0.0)) fail("sigma_factor must be positive");
}

std::string to_string(TrackerKind kind) { return kind == TrackerKind::Dcf ? "dcf" : "cco"; }

TrackerConfig tracker_config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("tracker config: expected a JSON object");
  TrackerConfig c;
  if (j.contains("tracker")) {
    const auto t = j.at("tracker").get<std::string>();
    if (t == "cco") c = TrackerConfig::cco_defaults();
    else if (t != "dcf") throw std::invalid_argument("tracker config: unknown tracker '" + t + "'");
  }
  static const std::set<std::string> known = {
      "tracker", "features", "lambda_d", "mu", "padding", "scales", "scale_step", "scale_penalty", "crm",
      "grid_factor", "bandwidth", "lambda_c", "kernel", "pca_dims", "with_hog", "grid", "hog_cell", "msc_input",
      "head", "seed", "sigma_factor", "window"};
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw std::invalid_argument("tracker config: unknown key '" + key + "'");
  }
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
  };
  if (j.contains("features")) c.features = parse_feature_kind(j.at("features").get<std::string>());
  get("lambda_d", c.lambda_d);
  get("mu", c.mu);
  get("padding", c.padding);
  get("scales", c.scales);
  get("scale_step", c.scale_step);
  get("scale_penalty", c.scale_penalty);
  if (j.contains("crm")) {
    const auto& crm = j.at("crm");
    for (const auto& [key, value] : crm.items()) {
      if (key != "enabled" && key != "k" && key != "eta" && key != "zeta") {
        throw std::invalid_argument("tracker config: unknown key 'crm." + key + "'");
      }
    }
    if (crm.contains("enabled")) c.crm.enabled = crm.at("enabled").get<bool>();
    if (crm.contains("k")) c.crm.k = crm.at("k").get<std::size_t>();
    if (crm.contains("eta")) c.crm.eta = crm.at("eta").get<double>();
    if (crm.contains("zeta")) c.crm.zeta = crm.at("zeta").get<double>();
  }
  get("grid_factor", c.grid_factor);
  get("bandwidth", c.bandwidth);
  get("lambda_c", c.lambda_c);
  get("kernel", c.kernel);
  get("pca_dims", c.pca_dims);
  get("with_hog", c.with_hog);
  get("grid", c.grid);
  get("hog_cell", c.hog_cell);
  get("msc_input", c.msc_input);
  get("head", c.head);
  get("seed", c.seed);
  get("sigma_factor", c.sigma_factor);
  get("window", c.window);
  c.validate();
  return c;
}

nlohmann::json to_json(const TrackerConfig& c) {
  nlohmann::json j;
  j["tracker"] = to_string(c.tracker);
  j["features"] = to_string(c.features);
  j["lambda_d"] = c.lambda_d;
  j["mu"] = c.mu;
  j["padding"] = c.padding;
  j["scales"] = c.scales;
  j["scale_step"] = c.scale_step;
  j["scale_penalty"] = c.scale_penalty;
  j["crm"] = {{"enabled", c.crm.enabled}, {"k", c.crm.k}, {"eta", c.crm.eta}, {"zeta", c.crm.zeta}};
  j["grid_factor"] = c.grid_factor;
  j["bandwidth"] = c.bandwidth;
  j["lambda_c"] = c.lambda_c;
  j["kernel"] = c.kernel;
  j["pca_dims"] = c.pca_dims;
  j["with_hog"] = c.with_hog;
  j["grid"] = c.grid;
  j["hog_cell"] = c.hog_cell;
  j["msc_input"] = c.msc_input;
  j["head"] = c.head;
  j["seed"] = c.seed;
  j["sigma_factor"] = c.sigma_factor;
  j["window"] = c.window;
  return j;
}

std::vector<double> scale_factors(std::size_t scales, double step) {
  std::vector<double> out(scales);
  const double mid = static_cast<double>(scales - 1) / 2.0;
  for (std::size_t i = 0; i < scales; ++i) out[i] = std::pow(step, static_cast<double>(i) - mid);
  return out;
}

std::size_t pick_scale(const std::vector<ScaleCandidate>& candidates) {
  if (candidates.empty()) throw std::invalid_argument("pick_scale: no candidates");
  const double mid = static_cast<double>(candidates.size() - 1) / 2.0;
  std::size_t best = 0;
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const double a = candidates[i].penalized, b = candidates[best].penalized;
    if (a > b || (a == b && std::abs(static_cast<double>(i) - mid) < std::abs(static_cast<double>(best) - mid))) {
      best = i;
    }
  }
  return best;
}

void require_trackable(const Image& frame, const BoundingBox& box) {
  if (!(box.w >= 2.0) || !(box.h >= 2.0)) {
    throw std::invalid_argument("tracker init: degenerate box (w and h must be at least 2 px)");
  }
  const Point2 c = box.center();
  if (c.x < 0.0 || c.y < 0.0 || c.x > static_cast<double>(frame.width()) ||
      c.y > static_cast<double>(frame.height())) {
    throw std::invalid_argument("tracker init: box centre lies outside the frame");
  }
}

std::unique_ptr<Tracker> make_tracker(const TrackerConfig& config) {
  config.validate();
  if (config.tracker == TrackerKind::Cco) return std::make_unique<CcoTracker>(config);
  return std::make_unique<DcfTracker>(config);
}

}  // namespace msc
