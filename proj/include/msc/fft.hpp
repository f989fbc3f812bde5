#pragma once

#include "msc/tensor.hpp"

namespace msc {

// Per-channel 2-D DFT. Forward is unnormalized, the inverse carries the 1/(H*W) factor.
Spectrum fft2(const FeatureMap& map);
Spectrum fft2(const Spectrum& spec);
Spectrum ifft2_complex(const Spectrum& spec);

// Real part of the inverse transform.
FeatureMap ifft2(const Spectrum& spec);

// Largest |imag| after the inverse transform; used to confirm real-valued results.
double max_imag(const Spectrum& values);

Spectrum hadamard(const Spectrum& a, const Spectrum& b);
Spectrum conj(Spectrum a);

// Largest per-bin deviation from S[u,v] = conj(S[-u,-v]), relative to max |S|.
double hermitian_residual(const Spectrum& spec);

// Sum over channels of conj(a^l) * b^l; single-channel result.
Spectrum conj_dot_channels(const Spectrum& a, const Spectrum& b);

}  // namespace msc
