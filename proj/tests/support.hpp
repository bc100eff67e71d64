#pragma once

// Shared test oracles and helpers. The oracles here are deliberately
// independent of the library's transform path: plain O(N^2) summation and
// explicit loops, used to freeze expected values.

#include <cmath>
#include <numbers>
#include <vector>

#include "hno/field.hpp"
#include "hno/modes.hpp"
#include "hno/rng.hpp"
#include "hno/spectral.hpp"

namespace testsupport {

using hno::Complex;
using hno::ComplexSpectrum;
using hno::RealField;

constexpr double kPi = std::numbers::pi;

// Naive O(N^2) DFT along one spatial axis; forward is unnormalized, inverse
// carries 1/N, matching the library convention.
inline ComplexSpectrum naive_dft_axis(const ComplexSpectrum& in, std::size_t spatial_axis,
                                      bool forward) {
    const std::size_t axis = spatial_axis + 1;
    const std::size_t n = in.shape()[axis];
    const std::size_t stride = in.stride(axis);
    const std::size_t block = stride * n;
    const std::size_t outer = in.size() / block;
    ComplexSpectrum out(in.shape());
    for (std::size_t o = 0; o < outer; ++o) {
        for (std::size_t t = 0; t < stride; ++t) {
            for (std::size_t k = 0; k < n; ++k) {
                Complex acc{0.0, 0.0};
                for (std::size_t j = 0; j < n; ++j) {
                    const double a = 2.0 * kPi * static_cast<double>(k) * static_cast<double>(j) /
                                     static_cast<double>(n) * (forward ? -1.0 : 1.0);
                    acc += in[o * block + j * stride + t] * Complex{std::cos(a), std::sin(a)};
                }
                if (!forward) acc /= static_cast<double>(n);
                out[o * block + k * stride + t] = acc;
            }
        }
    }
    return out;
}

inline ComplexSpectrum naive_dft(const ComplexSpectrum& in,
                                 const std::vector<std::size_t>& axes, bool forward) {
    ComplexSpectrum out = in;
    for (std::size_t a : axes) out = naive_dft_axis(out, a, forward);
    return out;
}

inline ComplexSpectrum embed(const RealField& f) {
    ComplexSpectrum s(f.shape());
    for (std::size_t i = 0; i < f.size(); ++i) s[i] = Complex{f[i], 0.0};
    return s;
}

inline RealField random_field(const std::vector<std::size_t>& shape, hno::Rng& rng,
                              double lo = -1.0, double hi = 1.0) {
    RealField f(shape);
    for (double& v : f.raw()) v = rng.uniform(lo, hi);
    return f;
}

inline ComplexSpectrum random_spectrum(const std::vector<std::size_t>& shape, hno::Rng& rng) {
    ComplexSpectrum s(shape);
    for (Complex& z : s.raw()) z = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    return s;
}

inline double max_abs_diff(const RealField& a, const RealField& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline double max_abs_diff(const ComplexSpectrum& a, const ComplexSpectrum& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline double max_abs(const ComplexSpectrum& a) {
    double m = 0.0;
    for (const Complex& z : a.raw()) m = std::max(m, std::abs(z));
    return m;
}

inline Complex inner(const ComplexSpectrum& a, const ComplexSpectrum& b) {
    Complex s{0.0, 0.0};
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * std::conj(b[i]);
    return s;
}

inline double inner(const RealField& a, const RealField& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// Zeroes every kernel row whose bin along the given transformed axis is the
// DC bin or (for even axis length) the Nyquist bin.
inline hno::SpectralKernel mask_dc_nyquist(const hno::SpectralKernel& k, std::size_t axis,
                                           std::size_t axis_size) {
    hno::SpectralKernel out = k;
    const std::vector<std::size_t> kept = hno::kept_indices(axis_size, k.modes[axis]);
    const std::size_t cc = k.in_channels * k.out_channels;
    const std::size_t bins = k.bin_count();
    // stride of the axis within the flat bin index
    std::size_t stride = 1;
    for (std::size_t a = k.extents.size(); a-- > axis + 1;) stride *= k.extents[a];
    for (std::size_t flat = 0; flat < bins; ++flat) {
        const std::size_t pos = (flat / stride) % k.extents[axis];
        const std::size_t orig = kept[pos];
        if (orig == 0 || 2 * orig == axis_size)
            for (std::size_t q = 0; q < cc; ++q) out.weights[flat * cc + q] = {0.0, 0.0};
    }
    return out;
}

}  // namespace testsupport
