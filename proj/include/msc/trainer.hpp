#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "msc/backbone.hpp"
#include "msc/cf_layer.hpp"
#include "msc/msc_head.hpp"
#include "msc/sequence.hpp"
#include "msc/sgd.hpp"

namespace msc {

// (x, z, g): x is the target-centred sample, z a nearby frame with the target
// displaced, g the label centred on that displacement. Samples are stored after
// the frozen resampling layers so only the head is recomputed per step.
struct Triplet {
  ResampledMaps x;
  ResampledMaps z;
  GaussianLabel g;
};

struct TripletOptions {
  std::size_t input_size = 224;
  double padding = 1.65;
  double max_offset_fraction = 0.25;  // of the crop size, per axis
  std::size_t max_frame_gap = 10;
  std::uint64_t seed = 1;
};

std::vector<Triplet> make_triplets(std::span<const Image> frames, std::span<const BoundingBox> boxes, std::size_t count,
                                   const TripletOptions& options = {});
std::vector<Triplet> make_triplets(const SequenceSpec& sequence, std::size_t count, const TripletOptions& options = {});

struct TrainConfig {
  double lambda = kDefaultCfLambda;
  SgdConfig sgd{};
  std::size_t epochs = 200;
  std::size_t batch = 16;
  std::uint64_t seed = 1;
  bool window = true;  // Hann taper on both feature maps before the CF layer
};

struct TripletLoss {
  double loss = 0.0;
  HeadGrad grad;
};

// Loss of one triplet through head -> optional window -> CF layer, with head-parameter gradients.
TripletLoss triplet_loss(const Triplet& t, const CompressionHead& head, double lambda,
                         const FeatureMap* window = nullptr);

// Summed loss of a batch (no gradients).
double batch_loss(std::span<const Triplet> batch, const CompressionHead& head, double lambda,
                  const FeatureMap* window = nullptr);

struct TrainResult {
  CompressionHead head;
  std::vector<double> epoch_loss;  // mean per-triplet loss seen during each epoch
};

// Minibatch SGD on the summed batch loss, triplets reshuffled every epoch.
TrainResult train_head(CompressionHead head, std::span<const Triplet> triplets, const TrainConfig& config);

// Flattened view of head parameters in a fixed order (shallow W, shallow b, deep W, deep b).
std::vector<double> flatten_params(const CompressionHead& head);
std::vector<double> flatten_grad(const HeadGrad& grad);
void unflatten_params(CompressionHead& head, std::span<const double> values);

}  // namespace msc
