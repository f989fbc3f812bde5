#include "msc/cf_layer.hpp"

#include "msc/fft.hpp"

namespace msc {

CfForward cf_forward(const FeatureMap& phi_x, const FeatureMap& phi_z, const GaussianLabel& g, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("cf_forward: lambda must be positive");
  require_same_shape(phi_x.shape(), phi_z.shape(), "cf_forward");
  if (g.values.height() != phi_x.height() || g.values.width() != phi_x.width()) {
    throw std::invalid_argument("cf_forward: label " + to_string(g.values.shape()) + " does not match features " +
                                to_string(phi_x.shape()));
  }
  CfForward fwd;
  CfLayerTape& tape = fwd.tape;
  tape.lambda = lambda;
  tape.x_hat = fft2(phi_x);
  tape.z_hat = fft2(phi_z);
  tape.g_hat = fft2(g.values);

  const std::size_t bins = phi_x.shape().plane();
  const std::size_t d = phi_x.channels();
  tape.denominator.assign(bins, lambda);
  tape.filter_hat = Spectrum(phi_x.shape());
  Spectrum r_hat(phi_x.height(), phi_x.width(), 1);
  for (std::size_t k = 0; k < bins; ++k) {
    const Complex* x = tape.x_hat.data() + k * d;
    const Complex* z = tape.z_hat.data() + k * d;
    double b = lambda;
    for (std::size_t l = 0; l < d; ++l) b += std::norm(x[l]);
    tape.denominator[k] = b;
    const Complex gc = std::conj(tape.g_hat[k]);
    Complex acc{};
    for (std::size_t l = 0; l < d; ++l) {
      const Complex h = x[l] * gc / b;
      tape.filter_hat[k * d + l] = h;
      acc += std::conj(h) * z[l];
    }
    r_hat[k] = acc;
  }
  const Spectrum r_full = ifft2_complex(r_hat);
  tape.response_imag = max_imag(r_full);
  tape.response = FeatureMap(phi_x.height(), phi_x.width(), 1);
  for (std::size_t k = 0; k < bins; ++k) tape.response[k] = r_full[k].real();

  double loss = 0.0;
  for (std::size_t k = 0; k < bins; ++k) {
    const double e = tape.response[k] - g.values[k];
    loss += e * e;
  }
  fwd.loss = loss;
  fwd.response = tape.response;
  return fwd;
}

CfGrad cf_backward(const CfLayerTape& tape, const FeatureMap& upstream) {
  if (upstream.height() != tape.response.height() || upstream.width() != tape.response.width() ||
      upstream.channels() != 1) {
    throw std::invalid_argument("cf_backward: upstream " + to_string(upstream.shape()) + " does not match response " +
                                to_string(tape.response.shape()));
  }
  const Spectrum u_hat = fft2(upstream);
  const std::size_t bins = tape.response.shape().plane();
  const std::size_t d = tape.x_hat.channels();
  Spectrum gx(tape.x_hat.shape()), gz(tape.x_hat.shape());
  for (std::size_t k = 0; k < bins; ++k) {
    const Complex* x = tape.x_hat.data() + k * d;
    const Complex* z = tape.z_hat.data() + k * d;
    const double b = tape.denominator[k];
    const Complex g = tape.g_hat[k];
    const Complex alpha = g / b;  // response spectrum = alpha * sum_l conj(x^l) z^l
    Complex s{};
    for (std::size_t l = 0; l < d; ++l) s += std::conj(x[l]) * z[l];
    const Complex u = u_hat[k];
    // Denominator path: d(alpha)/dB = -g / B^2 and dB = 2 Re(conj(x) dx).
    const double rho = -(std::conj(u) * s * g).real() / (b * b);
    for (std::size_t l = 0; l < d; ++l) {
      gz[k * d + l] = std::conj(alpha) * x[l] * u;
      gx[k * d + l] = std::conj(u) * alpha * z[l] + 2.0 * rho * x[l];
    }
  }
  return CfGrad{ifft2(gx), ifft2(gz)};
}

FeatureMap cf_loss_upstream(const CfForward& fwd, const GaussianLabel& g) {
  FeatureMap up(fwd.response.shape());
  for (std::size_t k = 0; k < up.size(); ++k) up[k] = 2.0 * (fwd.response[k] - g.values[k]);
  return up;
}

}  // namespace msc
