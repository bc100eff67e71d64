#include "hno/fft.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

namespace hno {
namespace {

constexpr double kPi = std::numbers::pi;

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_pow2(std::size_t n) {
    std::size_t m = 1;
    while (m < n) m <<= 1;
    return m;
}

// Iterative radix-2 Cooley-Tukey, unnormalized in both directions. The
// strided entry point transforms `stride` interleaved lines at once, viewing
// the data as an (n, stride) block; the butterflies then run over contiguous
// runs, which is what makes multi-channel batched fields cheap.
class Pow2Fft {
public:
    explicit Pow2Fft(std::size_t n) : n_(n), rev_(n, 0), tw_(n / 2) {
        std::size_t bits = 0;
        while ((std::size_t{1} << bits) < n) ++bits;
        for (std::size_t i = 1; i < n; ++i)
            rev_[i] = (rev_[i >> 1] >> 1) | ((i & 1) << (bits - 1));
        for (std::size_t j = 0; j < n / 2; ++j) {
            const double a = -2.0 * kPi * static_cast<double>(j) / static_cast<double>(n);
            tw_[j] = {std::cos(a), std::sin(a)};
        }
    }

    void run(Complex* x, bool forward) const { run_tile(x, 1, 1, forward); }

    // Transforms `tile` interleaved lines whose rows are `row_stride` apart.
    // Callers pick the tile so an (n x tile) panel stays cache resident.
    void run_tile(Complex* d, std::size_t row_stride, std::size_t tile, bool forward) const {
        const std::size_t n = n_;
        if (n < 2) return;
        for (std::size_t i = 1; i < n; ++i)
            if (i < rev_[i]) {
                Complex* a = d + i * row_stride;
                Complex* b = d + rev_[i] * row_stride;
                for (std::size_t t = 0; t < tile; ++t) std::swap(a[t], b[t]);
            }
        for (std::size_t len = 2; len <= n; len <<= 1) {
            const std::size_t half = len >> 1;
            const std::size_t step = n / len;
            for (std::size_t base = 0; base < n; base += len) {
                for (std::size_t k = 0; k < half; ++k) {
                    const Complex w = tw_[k * step];
                    const double wr = w.real();
                    const double wi = forward ? w.imag() : -w.imag();
                    double* pu = reinterpret_cast<double*>(d + (base + k) * row_stride);
                    double* pv = reinterpret_cast<double*>(d + (base + k + half) * row_stride);
                    for (std::size_t t = 0; t < 2 * tile; t += 2) {
                        const double ur = pu[t], ui = pu[t + 1];
                        const double xr = pv[t], xi = pv[t + 1];
                        const double vr = xr * wr - xi * wi;
                        const double vi = xr * wi + xi * wr;
                        pu[t] = ur + vr;
                        pu[t + 1] = ui + vi;
                        pv[t] = ur - vr;
                        pv[t + 1] = ui - vi;
                    }
                }
            }
        }
    }

private:
    std::size_t n_;
    std::vector<std::size_t> rev_;
    std::vector<Complex> tw_;
};

// Single-length transform plan: radix-2 directly, Bluestein otherwise.
class LinePlan {
public:
    explicit LinePlan(std::size_t n) : n_(n) {
        if (is_pow2(n)) {
            pow2_ = std::make_unique<Pow2Fft>(n);
            return;
        }
        m_ = next_pow2(2 * n - 1);
        sub_ = std::make_unique<Pow2Fft>(m_);
        chirp_.resize(n);
        for (std::size_t j = 0; j < n; ++j) {
            // exp(-i*pi*j^2/n); the square is reduced mod 2n to keep the
            // angle argument small for long lines.
            const std::size_t q = (j * j) % (2 * n);
            const double a = -kPi * static_cast<double>(q) / static_cast<double>(n);
            chirp_[j] = {std::cos(a), std::sin(a)};
        }
        bft_.assign(m_, Complex{0.0, 0.0});
        bft_[0] = std::conj(chirp_[0]);
        for (std::size_t j = 1; j < n; ++j) {
            bft_[j] = std::conj(chirp_[j]);
            bft_[m_ - j] = std::conj(chirp_[j]);
        }
        sub_->run(bft_.data(), true);
    }

    // Unnormalized forward transform of a contiguous line.
    void forward(Complex* x) const {
        if (pow2_) {
            pow2_->run(x, true);
            return;
        }
        std::vector<Complex> a(m_, Complex{0.0, 0.0});
        for (std::size_t j = 0; j < n_; ++j) a[j] = x[j] * chirp_[j];
        sub_->run(a.data(), true);
        for (std::size_t j = 0; j < m_; ++j) a[j] *= bft_[j];
        sub_->run(a.data(), false);
        const double inv_m = 1.0 / static_cast<double>(m_);
        for (std::size_t k = 0; k < n_; ++k) x[k] = chirp_[k] * (a[k] * inv_m);
    }

    // Unnormalized inverse, via conj(forward(conj(x))).
    void inverse_unscaled(Complex* x) const {
        if (pow2_) {
            pow2_->run(x, false);
            return;
        }
        for (std::size_t j = 0; j < n_; ++j) x[j] = std::conj(x[j]);
        forward(x);
        for (std::size_t j = 0; j < n_; ++j) x[j] = std::conj(x[j]);
    }

    const Pow2Fft* pow2_engine() const { return pow2_.get(); }

private:
    std::size_t n_;
    std::size_t m_ = 0;
    std::unique_ptr<Pow2Fft> pow2_;
    std::unique_ptr<Pow2Fft> sub_;
    std::vector<Complex> chirp_;
    std::vector<Complex> bft_;
};

// Plans are immutable once built; the cache itself is guarded so transforms
// may run from many threads.
const LinePlan& plan_for(std::size_t n) {
    static std::mutex mu;
    static std::map<std::size_t, std::unique_ptr<LinePlan>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<LinePlan>(n);
    return *slot;
}

enum class Pass { forward, inverse, forward_over_n, inverse_unscaled };

void transform_axis(ComplexSpectrum& s, std::size_t array_axis, Pass pass) {
    const std::size_t n = s.shape()[array_axis];
    const LinePlan& plan = plan_for(n);
    const std::size_t stride = s.stride(array_axis);
    const std::size_t block = stride * n;
    const std::size_t outer = s.size() / block;
    const double inv_n = 1.0 / static_cast<double>(n);
    const bool want_forward = (pass == Pass::forward || pass == Pass::forward_over_n);
    const bool want_scale = (pass == Pass::inverse || pass == Pass::forward_over_n);
    Complex* d = s.data();
    if (const Pow2Fft* engine = plan.pow2_engine()) {
        // keep an (n x tile) working panel around L1 size, tiles on cache
        // line boundaries
        const std::size_t tile = std::min(stride, std::max<std::size_t>(4, 1024 / n));
        for (std::size_t o = 0; o < outer; ++o)
            for (std::size_t t0 = 0; t0 < stride; t0 += tile)
                engine->run_tile(d + o * block + t0, stride, std::min(tile, stride - t0),
                                 want_forward);
    } else {
        std::vector<Complex> line(n);
        for (std::size_t o = 0; o < outer; ++o) {
            for (std::size_t t = 0; t < stride; ++t) {
                Complex* base = d + o * block + t;
                for (std::size_t k = 0; k < n; ++k) line[k] = base[k * stride];
                if (want_forward)
                    plan.forward(line.data());
                else
                    plan.inverse_unscaled(line.data());
                for (std::size_t k = 0; k < n; ++k) base[k * stride] = line[k];
            }
        }
    }
    if (want_scale)
        for (std::size_t i = 0; i < s.size(); ++i) d[i] *= inv_n;
}

ComplexSpectrum run_passes(ComplexSpectrum s, const std::vector<std::size_t>& axes, Pass pass) {
    const std::size_t rank = s.spatial_rank();
    for (std::size_t a : axes)
        if (a >= rank)
            throw std::invalid_argument("dft: spatial axis " + std::to_string(a) +
                                        " out of range for rank-" + std::to_string(rank) +
                                        " field");
    for (std::size_t a : axes) transform_axis(s, a + 1, pass);
    return s;
}

}  // namespace

ComplexSpectrum dft_forward(const RealField& field, const std::vector<std::size_t>& axes) {
    return run_passes(to_complex(field), axes, Pass::forward);
}

ComplexSpectrum dft_forward(const ComplexSpectrum& field, const std::vector<std::size_t>& axes) {
    return run_passes(field, axes, Pass::forward);
}

ComplexSpectrum dft_inverse(const ComplexSpectrum& spec, const std::vector<std::size_t>& axes) {
    return run_passes(spec, axes, Pass::inverse);
}

ComplexSpectrum dft_forward_adjoint(const ComplexSpectrum& g,
                                    const std::vector<std::size_t>& axes) {
    return run_passes(g, axes, Pass::inverse_unscaled);
}

ComplexSpectrum dft_inverse_adjoint(const ComplexSpectrum& g,
                                    const std::vector<std::size_t>& axes) {
    return run_passes(g, axes, Pass::forward_over_n);
}

ComplexSpectrum to_complex(const RealField& f) {
    ComplexSpectrum s(f.shape());
    for (std::size_t i = 0; i < f.size(); ++i) s[i] = Complex{f[i], 0.0};
    return s;
}

RealField take_real(const ComplexSpectrum& s, double* max_discarded_imag) {
    RealField f(s.shape());
    double worst = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        f[i] = s[i].real();
        worst = std::max(worst, std::abs(s[i].imag()));
    }
    if (max_discarded_imag) *max_discarded_imag = worst;
    return f;
}

}  // namespace hno
