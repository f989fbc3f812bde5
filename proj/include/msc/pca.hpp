#pragma once

#include <Eigen/Dense>
#include <span>

#include "msc/tensor.hpp"

namespace msc {

inline constexpr std::size_t kPcaDims = 38;

// Projection of per-pixel channel vectors onto their leading principal directions.
struct PcaProjector {
  Eigen::VectorXd mean;           // D
  Eigen::MatrixXd basis;          // D x K, orthonormal columns, descending variance
  Eigen::VectorXd eigenvalues;    // all D covariance eigenvalues, descending

  std::size_t input_dims() const { return static_cast<std::size_t>(basis.rows()); }
  std::size_t output_dims() const { return static_cast<std::size_t>(basis.cols()); }
};

// Every pixel of every map is one sample. Requires sample count >= out_dims and
// channel count >= out_dims. Zero-variance directions are kept when the covariance
// is rank deficient. Each basis vector's largest-magnitude entry is made positive.
PcaProjector pca_fit(std::span<const FeatureMap> samples, std::size_t out_dims = kPcaDims);
PcaProjector pca_fit(const FeatureMap& samples, std::size_t out_dims = kPcaDims);

FeatureMap pca_project(const PcaProjector& projector, const FeatureMap& map);
FeatureMap pca_reconstruct(const PcaProjector& projector, const FeatureMap& projected);

}  // namespace msc
