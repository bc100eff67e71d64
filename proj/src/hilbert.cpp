#include "hno/hilbert.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "hno/errors.hpp"
#include "hno/fft.hpp"

namespace hno {

std::vector<Complex> hilbert_multiplier(std::size_t n) {
    if (n == 0) throw std::invalid_argument("hilbert_multiplier: zero length");
    std::vector<Complex> h(n, Complex{0.0, 0.0});
    for (std::size_t k = 1; k < n; ++k) {
        if (2 * k < n)
            h[k] = {0.0, -1.0};
        else if (2 * k > n)
            h[k] = {0.0, 1.0};
        // 2k == n: Nyquist stays zero
    }
    return h;
}

void apply_hilbert_multiplier(ComplexSpectrum& spec, std::size_t spatial_axis, bool conjugate) {
    if (spatial_axis >= spec.spatial_rank())
        throw std::invalid_argument("apply_hilbert_multiplier: spatial axis " +
                                    std::to_string(spatial_axis) + " out of range");
    const std::size_t array_axis = spatial_axis + 1;
    const std::size_t n = spec.shape()[array_axis];
    std::vector<Complex> h = hilbert_multiplier(n);
    if (conjugate)
        for (Complex& z : h) z = std::conj(z);
    const std::size_t stride = spec.stride(array_axis);
    const std::size_t block = stride * n;
    const std::size_t outer = spec.size() / block;
    Complex* d = spec.data();
    for (std::size_t o = 0; o < outer; ++o)
        for (std::size_t k = 0; k < n; ++k) {
            const Complex hk = h[k];
            Complex* row = d + o * block + k * stride;
            for (std::size_t t = 0; t < stride; ++t) row[t] *= hk;
        }
}

RealField hilbert_transform(const RealField& field, std::size_t spatial_axis) {
    if (spatial_axis >= field.spatial_rank())
        throw std::invalid_argument("hilbert_transform: spatial axis " +
                                    std::to_string(spatial_axis) + " out of range");
    const std::vector<std::size_t> axes{spatial_axis};
    ComplexSpectrum spec = dft_forward(field, axes);
    apply_hilbert_multiplier(spec, spatial_axis);
    double residue = 0.0;
    RealField out = take_real(dft_inverse(spec, axes), &residue);
    if (residue > 1e-12 * std::max(1.0, linf_norm(field)))
        throw NumericError("hilbert_transform: imaginary residue " + std::to_string(residue) +
                           " exceeds tolerance");
    return out;
}

RealField inverse_hilbert_transform(const RealField& field, std::size_t spatial_axis) {
    RealField out = hilbert_transform(field, spatial_axis);
    for (double& v : out.raw()) v = -v;
    return out;
}

ComplexSpectrum AnalyticSignal::combined() const {
    ComplexSpectrum c(real_part.shape());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = Complex{real_part[i], imag_part[i]};
    return c;
}

AnalyticSignal analytic_signal(const RealField& field, std::size_t spatial_axis) {
    return {field, hilbert_transform(field, spatial_axis)};
}

EnvelopePhase instantaneous_envelope_phase(const AnalyticSignal& sig) {
    if (sig.real_part.shape() != sig.imag_part.shape())
        throw std::invalid_argument("instantaneous_envelope_phase: part shape mismatch");
    RealField env(sig.real_part.shape());
    RealField phase(sig.real_part.shape());
    constexpr double pi = std::numbers::pi;
    for (std::size_t i = 0; i < env.size(); ++i) {
        const double re = sig.real_part[i];
        const double im = sig.imag_part[i];
        env[i] = std::hypot(re, im);
        if (re == 0.0 && im == 0.0) {
            phase[i] = 0.0;
        } else {
            double p = std::atan2(im, re);
            if (p == -pi) p = pi;  // pin the branch cut to (-pi, pi]
            phase[i] = p;
        }
    }
    return {std::move(env), std::move(phase)};
}

}  // namespace hno
