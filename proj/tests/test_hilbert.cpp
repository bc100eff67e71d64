#include <cmath>

#include "doctest.h"
#include "hno/fft.hpp"
#include "hno/hilbert.hpp"
#include "hno/rng.hpp"
#include "support.hpp"

using namespace hno;
using namespace testsupport;

namespace {

// DC and (even-length) Nyquist components of a 1D sample vector, computed by
// direct summation.
RealField dc_nyquist_part(const RealField& v) {
    const std::size_t n = v.spatial_extent(0);
    double mean = 0.0, nyq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mean += v[i];
        if (n % 2 == 0) nyq += v[i] * ((i % 2 == 0) ? 1.0 : -1.0);
    }
    mean /= double(n);
    nyq /= double(n);
    RealField out(v.shape());
    for (std::size_t i = 0; i < n; ++i)
        out[i] = mean + ((n % 2 == 0) ? nyq * ((i % 2 == 0) ? 1.0 : -1.0) : 0.0);
    return out;
}

}  // namespace

TEST_CASE("multiplier enumerations") {
    const auto h4 = hilbert_multiplier(4);
    CHECK(h4 == std::vector<Complex>{{0, 0}, {0, -1}, {0, 0}, {0, 1}});
    const auto h5 = hilbert_multiplier(5);
    CHECK(h5 == std::vector<Complex>{{0, 0}, {0, -1}, {0, -1}, {0, 1}, {0, 1}});
    const auto h1 = hilbert_multiplier(1);
    CHECK(h1 == std::vector<Complex>{{0, 0}});
}

TEST_CASE("canonical pairs: H{cos} = sin and H{sin} = -cos") {
    const std::size_t n = 64;
    RealField c({1, n, 1}), s({1, n, 1});
    for (std::size_t i = 0; i < n; ++i) {
        c[i] = std::cos(2.0 * kPi * double(i) / double(n));
        s[i] = std::sin(2.0 * kPi * double(i) / double(n));
    }
    RealField hc = hilbert_transform(c, 0);
    RealField hs = hilbert_transform(s, 0);
    for (std::size_t i = 0; i < n; ++i) {
        CHECK(std::abs(hc[i] - s[i]) < 1e-10);
        CHECK(std::abs(hs[i] + c[i]) < 1e-10);
    }
    // inverse transform takes sin back to cos
    RealField ihs = inverse_hilbert_transform(s, 0);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(ihs[i] - c[i]) < 1e-10);
}

TEST_CASE("constant fields are annihilated and outputs have zero mean") {
    RealField c({1, 33, 1});
    for (double& v : c.raw()) v = 2.5;
    RealField hc = hilbert_transform(c, 0);
    CHECK(linf_norm(hc) < 1e-12);

    Rng rng(31);
    RealField v = random_field({1, 48, 1}, rng);
    RealField hv = hilbert_transform(v, 0);
    double mean = 0.0;
    for (double x : hv.raw()) mean += x;
    CHECK(std::abs(mean / 48.0) < 1e-12);
}

TEST_CASE("double application negates the band-pass part") {
    Rng rng(32);
    for (std::size_t n : {32u, 33u}) {
        RealField v = random_field({1, n, 1}, rng);
        RealField hh = hilbert_transform(hilbert_transform(v, 0), 0);
        RealField keep = dc_nyquist_part(v);
        for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(hh[i] + (v[i] - keep[i])) < 1e-10);
    }
}

TEST_CASE("inverse undoes the transform up to DC and Nyquist") {
    Rng rng(33);
    RealField v = random_field({1, 24, 1}, rng);
    RealField round = inverse_hilbert_transform(hilbert_transform(v, 0), 0);
    RealField keep = dc_nyquist_part(v);
    for (std::size_t i = 0; i < v.size(); ++i)
        CHECK(std::abs(round[i] - (v[i] - keep[i])) < 1e-10);

    // exact round trip once DC and Nyquist are removed first
    RealField vb(v.shape());
    for (std::size_t i = 0; i < v.size(); ++i) vb[i] = v[i] - keep[i];
    RealField round2 = inverse_hilbert_transform(hilbert_transform(vb, 0), 0);
    CHECK(max_abs_diff(round2, vb) < 1e-10);
}

TEST_CASE("frequency-domain identity of the transform") {
    Rng rng(34);
    const std::size_t n = 20;
    RealField v = random_field({1, n, 1}, rng);
    ComplexSpectrum sv = dft_forward(v, {0});
    ComplexSpectrum sh = dft_forward(hilbert_transform(v, 0), {0});
    for (std::size_t k = 1; k < n; ++k) {
        if (2 * k == n) continue;
        const double sgn = (2 * k < n) ? 1.0 : -1.0;
        CHECK(std::abs(sh[k] - Complex{0.0, -sgn} * sv[k]) < 1e-12);
    }
}

TEST_CASE("anti-self-adjointness and band-pass energy preservation") {
    Rng rng(35);
    const std::size_t n = 30;
    RealField x = random_field({1, n, 1}, rng);
    RealField y = random_field({1, n, 1}, rng);
    CHECK(std::abs(inner(hilbert_transform(x, 0), y) + inner(x, hilbert_transform(y, 0))) <
          1e-10);

    RealField xb(x.shape());
    RealField keep = dc_nyquist_part(x);
    for (std::size_t i = 0; i < n; ++i) xb[i] = x[i] - keep[i];
    CHECK(std::abs(l2_norm(hilbert_transform(xb, 0)) - l2_norm(xb)) < 1e-10);
}

TEST_CASE("commutes with circular shifts") {
    Rng rng(36);
    const std::size_t n = 27;
    RealField v = random_field({1, n, 1}, rng);
    auto shift = [&](const RealField& f, std::size_t by) {
        RealField out(f.shape());
        for (std::size_t i = 0; i < n; ++i) out[(i + by) % n] = f[i];
        return out;
    };
    RealField a = hilbert_transform(shift(v, 5), 0);
    RealField b = shift(hilbert_transform(v, 0), 5);
    CHECK(max_abs_diff(a, b) < 1e-12);
}

TEST_CASE("directional transform on 2D fields matches per-line application") {
    Rng rng(37);
    const std::size_t nx = 6, ny = 8;
    RealField v = random_field({1, nx, ny, 1}, rng);
    for (std::size_t axis : {0u, 1u}) {
        RealField got = hilbert_transform(v, axis);
        // oracle: copy each 1D line and transform it alone
        const std::size_t lines = axis == 0 ? ny : nx;
        const std::size_t len = axis == 0 ? nx : ny;
        for (std::size_t l = 0; l < lines; ++l) {
            RealField line({1, len, 1});
            for (std::size_t i = 0; i < len; ++i)
                line[i] = axis == 0 ? v[i * ny + l] : v[l * ny + i];
            RealField hline = hilbert_transform(line, 0);
            for (std::size_t i = 0; i < len; ++i) {
                const double want = hline[i];
                const double have = axis == 0 ? got[i * ny + l] : got[l * ny + i];
                CHECK(std::abs(want - have) < 1e-12);
            }
        }
    }
}

TEST_CASE("analytic signal of a cosine is the complex exponential") {
    const std::size_t n = 64;
    for (std::size_t k : {1u, 3u, 17u}) {
        RealField v({1, n, 1});
        for (std::size_t i = 0; i < n; ++i)
            v[i] = std::cos(2.0 * kPi * double(k) * double(i) / double(n));
        AnalyticSignal sig = analytic_signal(v, 0);
        CHECK(max_abs_diff(sig.real_part, v) == 0.0);  // bit-for-bit
        ComplexSpectrum va = sig.combined();
        for (std::size_t i = 0; i < n; ++i) {
            const double a = 2.0 * kPi * double(k) * double(i) / double(n);
            CHECK(std::abs(va[i] - Complex{std::cos(a), std::sin(a)}) < 1e-10);
        }
    }
}

TEST_CASE("analytic signal of zero is zero, negative frequencies vanish") {
    RealField z({1, 16, 1});
    AnalyticSignal sz = analytic_signal(z, 0);
    CHECK(linf_norm(sz.imag_part) == 0.0);

    Rng rng(38);
    const std::size_t n = 32;
    RealField v = random_field({1, n, 1}, rng);
    double mean = 0.0;
    for (double x : v.raw()) mean += x;
    for (double& x : v.raw()) x -= mean / double(n);
    AnalyticSignal sig = analytic_signal(v, 0);
    ComplexSpectrum spec = dft_forward(sig.combined(), {0});
    for (std::size_t k = n / 2 + 1; k < n; ++k) CHECK(std::abs(spec[k]) < 1e-12 * double(n));
}

TEST_CASE("envelope and phase of a pure tone") {
    const std::size_t n = 128;
    RealField v({1, n, 1});
    for (std::size_t i = 0; i < n; ++i)
        v[i] = 3.0 * std::cos(2.0 * kPi * 5.0 * double(i) / double(n));
    EnvelopePhase ep = instantaneous_envelope_phase(analytic_signal(v, 0));
    const double slope = 2.0 * kPi * 5.0 / double(n);
    for (std::size_t i = 0; i < n; ++i) {
        CHECK(std::abs(ep.envelope[i] - 3.0) < 1e-10);
        // the phase walks linearly modulo 2*pi
        const double expected = std::remainder(slope * double(i), 2.0 * kPi);
        CHECK(std::abs(std::remainder(ep.phase[i] - expected, 2.0 * kPi)) < 1e-10);
    }
    // envelope times cos(phase) reconstructs the signal
    for (std::size_t i = 0; i < n; ++i)
        CHECK(std::abs(ep.envelope[i] * std::cos(ep.phase[i]) - v[i]) < 1e-10);
}

TEST_CASE("zero signal has zero envelope and the zero-phase convention") {
    RealField z({1, 8, 1});
    EnvelopePhase ep = instantaneous_envelope_phase(analytic_signal(z, 0));
    CHECK(linf_norm(ep.envelope) == 0.0);
    CHECK(linf_norm(ep.phase) == 0.0);
}

TEST_CASE("well-separated envelope-carrier product recovers the envelope") {
    const std::size_t n = 512;
    RealField v({1, n, 1});
    std::vector<double> env(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = double(i) / double(n);
        env[i] = 1.5 + std::cos(2.0 * kPi * 2.0 * t);
        v[i] = env[i] * std::cos(2.0 * kPi * 40.0 * t + 0.7);
    }
    EnvelopePhase ep = instantaneous_envelope_phase(analytic_signal(v, 0));
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(ep.envelope[i] - env[i]) < 1e-2);
}
