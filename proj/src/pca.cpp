#include "msc/pca.hpp"

#include <Eigen/Eigenvalues>

namespace msc {

PcaProjector pca_fit(std::span<const FeatureMap> samples, std::size_t out_dims) {
  if (samples.empty()) throw std::invalid_argument("pca_fit: no samples");
  const std::size_t d = samples.front().channels();
  std::size_t count = 0;
  for (const auto& m : samples) {
    if (m.channels() != d) throw std::invalid_argument("pca_fit: inconsistent channel counts");
    count += m.shape().plane();
  }
  if (out_dims == 0) throw std::invalid_argument("pca_fit: output dimension must be positive");
  if (d < out_dims) {
    throw std::invalid_argument("pca_fit: " + std::to_string(d) + " input channels, need >= " +
                                std::to_string(out_dims));
  }
  if (count < out_dims) {
    throw std::invalid_argument("pca_fit: " + std::to_string(count) + " samples, need >= " +
                                std::to_string(out_dims));
  }

  const auto dd = static_cast<Eigen::Index>(d);
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(dd);
  for (const auto& m : samples) {
    for (std::size_t p = 0; p < m.shape().plane(); ++p) mean += Eigen::Map<const Eigen::VectorXd>(m.data() + p * d, dd);
  }
  mean /= static_cast<double>(count);

  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(dd, dd);
  for (const auto& m : samples) {
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> rows(
        m.data(), static_cast<Eigen::Index>(m.shape().plane()), dd);
    const Eigen::MatrixXd centered = rows.rowwise() - mean.transpose();
    cov.noalias() += centered.transpose() * centered;
  }
  cov /= static_cast<double>(count);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) throw std::runtime_error("pca_fit: eigendecomposition failed");

  // Eigen returns ascending eigenvalues.
  PcaProjector proj;
  proj.mean = mean;
  proj.eigenvalues = solver.eigenvalues().reverse();
  proj.basis.resize(dd, static_cast<Eigen::Index>(out_dims));
  for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(out_dims); ++k) {
    Eigen::VectorXd v = solver.eigenvectors().col(dd - 1 - k);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0) v = -v;
    proj.basis.col(k) = v;
  }
  return proj;
}

PcaProjector pca_fit(const FeatureMap& samples, std::size_t out_dims) {
  return pca_fit(std::span<const FeatureMap>(&samples, 1), out_dims);
}

FeatureMap pca_project(const PcaProjector& projector, const FeatureMap& map) {
  const std::size_t d = projector.input_dims();
  const std::size_t k = projector.output_dims();
  if (map.channels() != d) {
    throw std::invalid_argument("pca_project: map has " + std::to_string(map.channels()) +
                                " channels, projector expects " + std::to_string(d));
  }
  FeatureMap out(map.height(), map.width(), k);
  const auto dd = static_cast<Eigen::Index>(d);
  const auto kk = static_cast<Eigen::Index>(k);
  for (std::size_t p = 0; p < map.shape().plane(); ++p) {
    Eigen::Map<const Eigen::VectorXd> x(map.data() + p * d, dd);
    Eigen::Map<Eigen::VectorXd> y(out.data() + p * k, kk);
    y.noalias() = projector.basis.transpose() * (x - projector.mean);
  }
  return out;
}

FeatureMap pca_reconstruct(const PcaProjector& projector, const FeatureMap& projected) {
  const std::size_t d = projector.input_dims();
  const std::size_t k = projector.output_dims();
  if (projected.channels() != k) throw std::invalid_argument("pca_reconstruct: channel mismatch");
  FeatureMap out(projected.height(), projected.width(), d);
  for (std::size_t p = 0; p < projected.shape().plane(); ++p) {
    Eigen::Map<const Eigen::VectorXd> y(projected.data() + p * k, static_cast<Eigen::Index>(k));
    Eigen::Map<Eigen::VectorXd> x(out.data() + p * d, static_cast<Eigen::Index>(d));
    x.noalias() = projector.mean + projector.basis * y;
  }
  return out;
}

}  // namespace msc
