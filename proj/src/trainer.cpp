#include "msc/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <random>

namespace msc {
namespace {

ResampledMaps backbone_sample(const ProxyBackbone& backbone, const Image& frame, Point2 center, Size2 crop) {
  const ImagePatch patch = extract_crop(frame, center, crop, backbone.input_size(), backbone.input_size());
  const BackboneMaps maps = backbone(patch.pixels);
  return resample_branches(maps.shallow, maps.deep);
}

}  // namespace

std::vector<Triplet> make_triplets(std::span<const Image> frames, std::span<const BoundingBox> boxes, std::size_t count,
                                   const TripletOptions& options) {
  if (frames.size() < 2 || boxes.size() != frames.size()) {
    throw std::invalid_argument("make_triplets: need >= 2 annotated frames");
  }
  if (options.max_frame_gap == 0) throw std::invalid_argument("make_triplets: max_frame_gap must be >= 1");
  const ProxyBackbone backbone(options.input_size);
  const double cells = static_cast<double>(backbone.fused_size());
  std::mt19937_64 rng(options.seed);
  std::uniform_int_distribution<std::size_t> pick_frame(0, frames.size() - 1);
  std::uniform_int_distribution<std::size_t> pick_gap(1, options.max_frame_gap);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  std::vector<Triplet> out;
  out.reserve(count);
  for (std::size_t n = 0; n < count; ++n) {
    const std::size_t i = pick_frame(rng);
    const std::size_t gap = pick_gap(rng);
    std::size_t j = i + gap < frames.size() ? i + gap : (i >= gap ? i - gap : (i + 1) % frames.size());
    if (j == i) j = (i + 1) % frames.size();
    const BoundingBox& bx = boxes[i];
    const BoundingBox& bz = boxes[j];
    const Size2 crop{bx.w * (1.0 + options.padding), bx.h * (1.0 + options.padding)};
    const double off_x = unit(rng) * options.max_offset_fraction * crop.width;
    const double off_y = unit(rng) * options.max_offset_fraction * crop.height;

    Triplet t;
    t.x = backbone_sample(backbone, frames[i], bx.center(), crop);
    const Point2 zc{bz.center().x + off_x, bz.center().y + off_y};
    t.z = backbone_sample(backbone, frames[j], zc, crop);
    // Target sits at -offset from the z patch centre.
    const double cell_x = crop.width / cells;
    const double cell_y = crop.height / cells;
    const double center = std::floor(cells / 2.0);
    const double sigma = default_label_sigma(bx.h / cell_y, bx.w / cell_x);
    t.g = gaussian_label(backbone.fused_size(), backbone.fused_size(), center - off_y / cell_y, center - off_x / cell_x,
                         sigma);
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<Triplet> make_triplets(const SequenceSpec& sequence, std::size_t count, const TripletOptions& options) {
  if (sequence.frames.size() < 2) throw std::invalid_argument("make_triplets: need >= 2 annotated frames");
  std::vector<Image> frames;
  frames.reserve(sequence.frames.size());
  for (const auto& p : sequence.frames) frames.push_back(load_image(p));
  return make_triplets(frames, sequence.ground_truth, count, options);
}

TripletLoss triplet_loss(const Triplet& t, const CompressionHead& head, double lambda, const FeatureMap* window) {
  const HeadActivations ax = head_forward(t.x, head);
  const HeadActivations az = head_forward(t.z, head);
  const auto taper = [window](const FeatureMap& m) { return window ? apply_window(m, *window) : m; };
  const CfForward fwd = cf_forward(taper(ax.features), taper(az.features), t.g, lambda);
  const CfGrad g = cf_backward(fwd.tape, cf_loss_upstream(fwd, t.g));
  TripletLoss out{fwd.loss, head_backward(t.x, ax, head, taper(g.d_phi_x))};
  accumulate(out.grad, head_backward(t.z, az, head, taper(g.d_phi_z)));
  return out;
}

double batch_loss(std::span<const Triplet> batch, const CompressionHead& head, double lambda,
                  const FeatureMap* window) {
  const auto taper = [window](const FeatureMap& m) { return window ? apply_window(m, *window) : m; };
  double total = 0.0;
  for (const auto& t : batch) {
    total += cf_forward(taper(head_forward(t.x, head).features), taper(head_forward(t.z, head).features), t.g, lambda)
                 .loss;
  }
  return total;
}

TrainResult train_head(CompressionHead head, std::span<const Triplet> triplets, const TrainConfig& config) {
  if (triplets.empty()) throw std::invalid_argument("train_head: no triplets");
  if (config.batch == 0) throw std::invalid_argument("train_head: batch size must be positive");
  head.validate();
  std::mt19937_64 rng(config.seed);
  std::vector<std::size_t> order(triplets.size());
  std::iota(order.begin(), order.end(), 0);
  SgdState state{config.sgd, {}, {}, {}, {}};
  const std::size_t h = triplets.front().g.values.height(), w = triplets.front().g.values.width();
  const std::optional<FeatureMap> window = config.window ? std::optional(hann_window(h, w)) : std::nullopt;
  const FeatureMap* taper = window ? &*window : nullptr;
  TrainResult result;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_total = 0.0;
    for (std::size_t start = 0; start < order.size(); start += config.batch) {
      const std::size_t stop = std::min(order.size(), start + config.batch);
      HeadGrad grad = zero_grad(head);
      for (std::size_t k = start; k < stop; ++k) {
        const TripletLoss tl = triplet_loss(triplets[order[k]], head, config.lambda, taper);
        epoch_total += tl.loss;
        accumulate(grad, tl.grad);
      }
      sgd_step(head, grad, state);
    }
    result.epoch_loss.push_back(epoch_total / static_cast<double>(triplets.size()));
  }
  result.head = std::move(head);
  return result;
}

std::vector<double> flatten_params(const CompressionHead& head) {
  std::vector<double> v;
  v.insert(v.end(), head.shallow.weights.begin(), head.shallow.weights.end());
  v.insert(v.end(), head.shallow.bias.begin(), head.shallow.bias.end());
  v.insert(v.end(), head.deep.weights.begin(), head.deep.weights.end());
  v.insert(v.end(), head.deep.bias.begin(), head.deep.bias.end());
  return v;
}

std::vector<double> flatten_grad(const HeadGrad& grad) {
  std::vector<double> v;
  v.insert(v.end(), grad.shallow.weights.begin(), grad.shallow.weights.end());
  v.insert(v.end(), grad.shallow.bias.begin(), grad.shallow.bias.end());
  v.insert(v.end(), grad.deep.weights.begin(), grad.deep.weights.end());
  v.insert(v.end(), grad.deep.bias.begin(), grad.deep.bias.end());
  return v;
}

void unflatten_params(CompressionHead& head, std::span<const double> values) {
  const std::size_t total = head.shallow.weights.size() + head.shallow.bias.size() + head.deep.weights.size() +
                            head.deep.bias.size();
  if (values.size() != total) throw std::invalid_argument("unflatten_params: size mismatch");
  auto it = values.begin();
  auto take = [&it](auto& dst) {
    std::copy_n(it, dst.size(), dst.begin());
    it += static_cast<long>(dst.size());
  };
  take(head.shallow.weights);
  take(head.shallow.bias);
  take(head.deep.weights);
  take(head.deep.bias);
}

}  // namespace msc
