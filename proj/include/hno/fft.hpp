#pragma once

#include <vector>

#include "hno/field.hpp"

namespace hno {

// Discrete Fourier transforms along listed spatial axes, applied
// independently per axis; batch and channel axes are untouched.
//
// Convention: unnormalized forward, 1/N inverse:
//   forward  X[k] = sum_n x[n] exp(-2*pi*i*k*n/N)
//   inverse  x[n] = (1/N) sum_k X[k] exp(+2*pi*i*k*n/N)
//
// Any axis length is supported: radix-2 for powers of two, Bluestein's
// chirp-z construction otherwise. An empty axis list is the identity.
ComplexSpectrum dft_forward(const RealField& field, const std::vector<std::size_t>& spatial_axes);
ComplexSpectrum dft_forward(const ComplexSpectrum& field,
                            const std::vector<std::size_t>& spatial_axes);
ComplexSpectrum dft_inverse(const ComplexSpectrum& spec,
                            const std::vector<std::size_t>& spatial_axes);

// Conjugate-transposed transforms, i.e. the reverse-mode adjoints:
// the adjoint of dft_forward is the unnormalized inverse transform and the
// adjoint of dft_inverse is the forward transform scaled by 1/N.
ComplexSpectrum dft_forward_adjoint(const ComplexSpectrum& g,
                                    const std::vector<std::size_t>& spatial_axes);
ComplexSpectrum dft_inverse_adjoint(const ComplexSpectrum& g,
                                    const std::vector<std::size_t>& spatial_axes);

ComplexSpectrum to_complex(const RealField& f);

// Drops imaginary parts. When max_discarded_imag is non-null it receives the
// largest |Im| that was dropped.
RealField take_real(const ComplexSpectrum& s, double* max_discarded_imag = nullptr);

}  // namespace hno
