#pragma once

#include <vector>

#include "hno/field.hpp"

namespace hno {

// Discrete Hilbert transform realized as the frequency multiplier
// -i*sgn(omega), with the DC bin and (for even lengths) the Nyquist bin
// mapped to zero.
//
// Because those two bins are annihilated, the Hilbert-sandwiched spectral
// path of an operator layer cannot carry the mean or Nyquist component of a
// feature; the local W-branch of the layer is what carries them. On
// multi-dimensional fields the transform is directional: it acts along one
// configurable spatial axis.

// h[0] = 0; h[k] = -i for 1 <= k < n/2; h[n/2] = 0 for even n; h[k] = +i
// for k > n/2.
std::vector<Complex> hilbert_multiplier(std::size_t n);

// Multiplies a spectrum by the Hilbert multiplier of the given spatial axis
// (by its complex conjugate when conjugate is set, which is the reverse-mode
// adjoint).
void apply_hilbert_multiplier(ComplexSpectrum& spec, std::size_t spatial_axis,
                              bool conjugate = false);

RealField hilbert_transform(const RealField& field, std::size_t spatial_axis);

// H^{-1} = -H on the band-pass subspace.
RealField inverse_hilbert_transform(const RealField& field, std::size_t spatial_axis);

struct AnalyticSignal {
    RealField real_part;  // the originating field, bit-for-bit
    RealField imag_part;  // its Hilbert transform
    ComplexSpectrum combined() const;  // v + i*H{v}
};

AnalyticSignal analytic_signal(const RealField& field, std::size_t spatial_axis);

struct EnvelopePhase {
    RealField envelope;
    RealField phase;
};

// envelope = |v_A| pointwise; phase = atan2(imag, real) in (-pi, pi], with
// phase defined as 0 where v_A = 0.
EnvelopePhase instantaneous_envelope_phase(const AnalyticSignal& sig);

}  // namespace hno
