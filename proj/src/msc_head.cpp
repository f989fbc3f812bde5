#include "msc/msc_head.hpp"

#include <fstream>
#include "json.hpp"
#include <random>

#include "msc/tensor_io.hpp"

namespace msc {

CompressionHead CompressionHead::random(std::size_t shallow_in, std::size_t deep_in, std::uint64_t seed) {
  if (shallow_in == 0 || deep_in == 0) throw std::invalid_argument("CompressionHead: zero input channels");
  std::mt19937_64 rng(seed);
  auto make = [&rng](std::size_t in, std::size_t out) {
    std::normal_distribution<double> dist(0.0, 1.0 / std::sqrt(static_cast<double>(in)));
    Conv1x1 layer{FeatureMap(in, out, 1), std::vector<double>(out, 0.0)};
    for (auto& w : layer.weights) w = dist(rng);
    return layer;
  };
  CompressionHead head;
  head.shallow = make(shallow_in, kShallowOut);
  head.deep = make(deep_in, kDeepOut);
  return head;
}

void CompressionHead::validate() const {
  if (shallow.outputs() != kShallowOut || deep.outputs() != kDeepOut) {
    throw std::invalid_argument("CompressionHead: output channels must be 32 (shallow) and 64 (deep)");
  }
  if (shallow.bias.size() != kShallowOut || deep.bias.size() != kDeepOut) {
    throw std::invalid_argument("CompressionHead: bias size mismatch");
  }
  require_finite(shallow.weights, "CompressionHead shallow weights");
  require_finite(deep.weights, "CompressionHead deep weights");
}

ResampledMaps resample_branches(const FeatureMap& shallow, const FeatureMap& deep) {
  ResampledMaps maps{max_pool(shallow, 7, 2), upsample(deep, 4)};
  if (maps.shallow.height() != maps.deep.height() || maps.shallow.width() != maps.deep.width()) {
    throw std::invalid_argument("msc_features: resampled branches disagree (" + to_string(maps.shallow.shape()) +
                                " vs " + to_string(maps.deep.shape()) + ")");
  }
  return maps;
}

HeadActivations head_forward(const ResampledMaps& inputs, const CompressionHead& head) {
  HeadActivations acts;
  acts.shallow_compressed = conv1x1(inputs.shallow, head.shallow);
  acts.deep_compressed = conv1x1(inputs.deep, head.deep);
  acts.features = concat_channels(lrn(acts.shallow_compressed, head.lrn), lrn(acts.deep_compressed, head.lrn));
  return acts;
}

HeadGrad head_backward(const ResampledMaps& inputs, const HeadActivations& acts, const CompressionHead& head,
                       const FeatureMap& upstream) {
  require_same_shape(upstream.shape(), acts.features.shape(), "head_backward");
  const std::size_t ds = head.shallow.outputs();
  std::vector<std::size_t> first(ds), second(head.deep.outputs());
  for (std::size_t i = 0; i < first.size(); ++i) first[i] = i;
  for (std::size_t i = 0; i < second.size(); ++i) second[i] = ds + i;
  const FeatureMap g_shallow = lrn_backward(acts.shallow_compressed, head.lrn, select_channels(upstream, first));
  const FeatureMap g_deep = lrn_backward(acts.deep_compressed, head.lrn, select_channels(upstream, second));
  return HeadGrad{conv1x1_backward(inputs.shallow, head.shallow, g_shallow),
                  conv1x1_backward(inputs.deep, head.deep, g_deep)};
}

void accumulate(HeadGrad& into, const HeadGrad& grad, double scale) {
  auto add = [scale](Conv1x1Grad& a, const Conv1x1Grad& b) {
    require_same_shape(a.weights.shape(), b.weights.shape(), "accumulate");
    for (std::size_t i = 0; i < a.weights.size(); ++i) a.weights[i] += scale * b.weights[i];
    for (std::size_t i = 0; i < a.bias.size(); ++i) a.bias[i] += scale * b.bias[i];
  };
  add(into.shallow, grad.shallow);
  add(into.deep, grad.deep);
}

HeadGrad zero_grad(const CompressionHead& head) {
  return HeadGrad{Conv1x1Grad{FeatureMap(head.shallow.weights.shape(), 0.0), std::vector<double>(head.shallow.outputs(), 0.0)},
                  Conv1x1Grad{FeatureMap(head.deep.weights.shape(), 0.0), std::vector<double>(head.deep.outputs(), 0.0)}};
}

FeatureMap msc_features(const FeatureMap& shallow, const FeatureMap& deep, const CompressionHead& head) {
  return head_forward(resample_branches(shallow, deep), head).features;
}

namespace {

std::filesystem::path with_suffix(const std::filesystem::path& stem, const char* suffix) {
  return std::filesystem::path(stem.string() + suffix);
}

}  // namespace

void save_head(const std::filesystem::path& stem, const CompressionHead& head) {
  head.validate();
  const std::size_t ns = head.shallow.weights.size();
  const std::size_t nd = head.deep.weights.size();
  FeatureMap weights(1, ns + nd, 1);
  std::copy(head.shallow.weights.begin(), head.shallow.weights.end(), weights.begin());
  std::copy(head.deep.weights.begin(), head.deep.weights.end(), weights.begin() + static_cast<long>(ns));
  FeatureMap biases(1, kMscChannels, 1);
  std::copy(head.shallow.bias.begin(), head.shallow.bias.end(), biases.begin());
  std::copy(head.deep.bias.begin(), head.deep.bias.end(), biases.begin() + static_cast<long>(kShallowOut));
  save_msct(with_suffix(stem, ".weights.msct"), weights);
  save_msct(with_suffix(stem, ".biases.msct"), biases);

  nlohmann::ordered_json meta;
  meta["shallow_in"] = head.shallow.inputs();
  meta["deep_in"] = head.deep.inputs();
  meta["shallow_out"] = kShallowOut;
  meta["deep_out"] = kDeepOut;
  meta["lrn"] = {{"n", head.lrn.size}, {"kappa", head.lrn.kappa}, {"alpha", head.lrn.alpha}, {"beta", head.lrn.beta}};
  std::ofstream out(with_suffix(stem, ".json"));
  if (!out) throw std::runtime_error("cannot write head sidecar for " + stem.string());
  out << meta.dump(2) << "\n";
}

CompressionHead load_head(const std::filesystem::path& stem) {
  std::ifstream in(with_suffix(stem, ".json"));
  if (!in) throw std::runtime_error("cannot open head sidecar " + with_suffix(stem, ".json").string());
  const auto meta = nlohmann::json::parse(in);
  const std::size_t cs = meta.at("shallow_in").get<std::size_t>();
  const std::size_t cd = meta.at("deep_in").get<std::size_t>();
  if (meta.at("shallow_out").get<std::size_t>() != kShallowOut || meta.at("deep_out").get<std::size_t>() != kDeepOut) {
    throw std::runtime_error("head checkpoint has unexpected output widths");
  }
  const FeatureMap weights = load_msct(with_suffix(stem, ".weights.msct"));
  const FeatureMap biases = load_msct(with_suffix(stem, ".biases.msct"));
  if (weights.size() != cs * kShallowOut + cd * kDeepOut || biases.size() != kMscChannels) {
    throw std::runtime_error("head checkpoint tensors do not match the sidecar dimensions");
  }
  CompressionHead head;
  head.shallow = Conv1x1{FeatureMap(cs, kShallowOut, 1), std::vector<double>(biases.begin(), biases.begin() + kShallowOut)};
  head.deep = Conv1x1{FeatureMap(cd, kDeepOut, 1), std::vector<double>(biases.begin() + kShallowOut, biases.end())};
  std::copy_n(weights.begin(), cs * kShallowOut, head.shallow.weights.begin());
  std::copy_n(weights.begin() + static_cast<long>(cs * kShallowOut), cd * kDeepOut, head.deep.weights.begin());
  const auto& l = meta.at("lrn");
  head.lrn = LrnParams{l.at("n").get<std::size_t>(), l.at("kappa").get<double>(), l.at("alpha").get<double>(),
                       l.at("beta").get<double>()};
  head.validate();
  return head;
}

}  // namespace msc
