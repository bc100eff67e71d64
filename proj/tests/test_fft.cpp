#include <cmath>
#include <thread>

#include "doctest.h"
#include "hno/fft.hpp"
#include "hno/rng.hpp"
#include "support.hpp"

using namespace hno;
using namespace testsupport;

TEST_CASE("constant signal transforms to a DC spike") {
    RealField x({1, 4, 1}, {1.0, 1.0, 1.0, 1.0});
    ComplexSpectrum s = dft_forward(x, {0});
    CHECK(std::abs(s[0] - Complex{4.0, 0.0}) < 1e-12);
    for (std::size_t k = 1; k < 4; ++k) CHECK(std::abs(s[k]) < 1e-12);
}

TEST_CASE("pure cosine occupies the conjugate bin pair") {
    const std::size_t n = 8;
    RealField x({1, n, 1});
    for (std::size_t i = 0; i < n; ++i) x[i] = std::cos(2.0 * kPi * double(i) / double(n));
    ComplexSpectrum s = dft_forward(x, {0});
    CHECK(std::abs(s[1] - Complex{4.0, 0.0}) < 1e-12);
    CHECK(std::abs(s[7] - Complex{4.0, 0.0}) < 1e-12);
    for (std::size_t k : {0, 2, 3, 4, 5, 6}) CHECK(std::abs(s[k]) < 1e-12);
}

TEST_CASE("fft path matches the naive O(N^2) oracle for every N <= 64") {
    Rng rng(101);
    for (std::size_t n = 1; n <= 64; ++n) {
        ComplexSpectrum x = random_spectrum({1, n, 1}, rng);
        ComplexSpectrum want = naive_dft(x, {0}, true);
        ComplexSpectrum got = dft_forward(x, {0});
        CHECK(max_abs_diff(got, want) / std::max(1.0, max_abs(want)) < 1e-9);
        ComplexSpectrum want_inv = naive_dft(x, {0}, false);
        ComplexSpectrum got_inv = dft_inverse(x, {0});
        CHECK(max_abs_diff(got_inv, want_inv) / std::max(1.0, max_abs(want_inv)) < 1e-9);
    }
}

TEST_CASE("inverse of a DC spike is the constant signal") {
    ComplexSpectrum s({1, 4, 1});
    s[0] = {4.0, 0.0};
    RealField x = take_real(dft_inverse(s, {0}));
    for (std::size_t i = 0; i < 4; ++i) CHECK(x[i] == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("round trip is the identity for mixed lengths") {
    Rng rng(7);
    for (std::size_t n : {4u, 8u, 15u, 16u, 64u, 256u, 257u}) {
        RealField x = random_field({2, n, 3}, rng);
        RealField back = take_real(dft_inverse(dft_forward(x, {0}), {0}));
        CHECK(max_abs_diff(back, x) < 1e-12);
    }
}

TEST_CASE("Parseval identity") {
    Rng rng(8);
    for (std::size_t n : {8u, 15u, 64u}) {
        RealField x = random_field({1, n, 1}, rng);
        ComplexSpectrum s = dft_forward(x, {0});
        double ex = 0.0, es = 0.0;
        for (double v : x.raw()) ex += v * v;
        for (const Complex& z : s.raw()) es += std::norm(z);
        es /= double(n);
        CHECK(std::abs(ex - es) / ex < 1e-12);
    }
}

TEST_CASE("linearity of the forward transform") {
    Rng rng(9);
    RealField x = random_field({1, 24, 2}, rng);
    RealField y = random_field({1, 24, 2}, rng);
    const double a = 1.7, b = -0.3;
    RealField mix(x.shape());
    for (std::size_t i = 0; i < mix.size(); ++i) mix[i] = a * x[i] + b * y[i];
    ComplexSpectrum sm = dft_forward(mix, {0});
    ComplexSpectrum sx = dft_forward(x, {0});
    ComplexSpectrum sy = dft_forward(y, {0});
    for (std::size_t i = 0; i < sm.size(); ++i)
        CHECK(std::abs(sm[i] - (a * sx[i] + b * sy[i])) < 1e-12);
}

TEST_CASE("real-input spectra are conjugate symmetric") {
    Rng rng(10);
    for (std::size_t n : {9u, 16u}) {
        RealField x = random_field({1, n, 1}, rng);
        ComplexSpectrum s = dft_forward(x, {0});
        for (std::size_t k = 0; k < n; ++k)
            CHECK(std::abs(s[k] - std::conj(s[(n - k) % n])) < 1e-12);
    }
}

TEST_CASE("2D transform equals per-axis naive application") {
    Rng rng(11);
    ComplexSpectrum x = random_spectrum({2, 8, 6, 2}, rng);
    ComplexSpectrum want = naive_dft(x, {0, 1}, true);
    ComplexSpectrum got = dft_forward(x, {0, 1});
    CHECK(max_abs_diff(got, want) < 1e-10);
    // axis order does not matter
    ComplexSpectrum swapped = dft_forward(x, {1, 0});
    CHECK(max_abs_diff(swapped, want) < 1e-10);
}

TEST_CASE("empty axis list is the identity, bad axis throws") {
    Rng rng(12);
    RealField x = random_field({1, 6, 1}, rng);
    ComplexSpectrum s = dft_forward(x, {});
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(s[i] == Complex{x[i], 0.0});
    CHECK_THROWS_AS((void)dft_forward(x, {1}), std::invalid_argument);
    CHECK_THROWS_AS((void)dft_inverse(s, {4}), std::invalid_argument);
}

TEST_CASE("adjoint transforms satisfy the inner-product identities") {
    Rng rng(13);
    for (std::size_t n : {12u, 16u}) {
        ComplexSpectrum x = random_spectrum({1, n, 2}, rng);
        ComplexSpectrum y = random_spectrum({1, n, 2}, rng);
        // <F x, y> = <x, F* y> over the real inner product Re<.,.>
        const double lhs = inner(dft_forward(x, {0}), y).real();
        const double rhs = inner(x, dft_forward_adjoint(y, {0})).real();
        CHECK(std::abs(lhs - rhs) < 1e-9);
        const double lhs2 = inner(dft_inverse(x, {0}), y).real();
        const double rhs2 = inner(x, dft_inverse_adjoint(y, {0})).real();
        CHECK(std::abs(lhs2 - rhs2) < 1e-9);
    }
}

TEST_CASE("take_real reports the discarded imaginary magnitude") {
    ComplexSpectrum s({1, 2, 1});
    s[0] = {1.0, 3e-3};
    s[1] = {2.0, -5e-3};
    double resid = 0.0;
    RealField f = take_real(s, &resid);
    CHECK(f[0] == 1.0);
    CHECK(f[1] == 2.0);
    CHECK(resid == doctest::Approx(5e-3));
}

TEST_CASE("transforms are safe to run concurrently") {
    Rng rng(14);
    RealField x = random_field({2, 96, 2}, rng);
    const ComplexSpectrum expected = dft_forward(x, {0});
    std::vector<ComplexSpectrum> results(8, ComplexSpectrum({1, 1}));
    std::vector<std::thread> workers;
    for (std::size_t t = 0; t < results.size(); ++t)
        workers.emplace_back([&, t] { results[t] = dft_forward(x, {0}); });
    for (auto& w : workers) w.join();
    for (const auto& r : results) CHECK(max_abs_diff(r, expected) == 0.0);
}
