#include "hno/spectral.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "hno/modes.hpp"

namespace hno {
namespace {

void check_compatible(const ComplexSpectrum& s, const SpectralKernel& k, std::size_t channels,
                      const char* who) {
    if (s.spatial_shape() != k.extents)
        throw std::invalid_argument(std::string(who) +
                                    ": kernel mode extents do not match spectrum extents");
    if (s.channels() != channels)
        throw std::invalid_argument(std::string(who) + ": channel count mismatch");
}

}  // namespace

void SpectralKernel::validate() const {
    if (in_channels == 0 || out_channels == 0)
        throw std::invalid_argument("SpectralKernel: zero channel count");
    if (weights.size() != bin_count() * in_channels * out_channels)
        throw std::invalid_argument("SpectralKernel: weight count does not match extents");
    for (const Complex& w : weights)
        if (!std::isfinite(w.real()) || !std::isfinite(w.imag()))
            throw std::invalid_argument("SpectralKernel: non-finite weight");
}

SpectralKernel make_kernel(const std::vector<std::size_t>& modes,
                           const std::vector<std::size_t>& axis_sizes, std::size_t in_channels,
                           std::size_t out_channels) {
    if (modes.size() != axis_sizes.size())
        throw std::invalid_argument("make_kernel: modes/axis_sizes length mismatch");
    SpectralKernel k;
    k.modes = modes;
    k.extents.reserve(modes.size());
    for (std::size_t i = 0; i < modes.size(); ++i)
        k.extents.push_back(kept_count(axis_sizes[i], modes[i]));
    k.in_channels = in_channels;
    k.out_channels = out_channels;
    k.weights.assign(k.bin_count() * in_channels * out_channels, Complex{0.0, 0.0});
    return k;
}

ComplexSpectrum channel_contract(const ComplexSpectrum& truncated, const SpectralKernel& kernel) {
    check_compatible(truncated, kernel, kernel.in_channels, "channel_contract");
    auto shape = truncated.shape();
    shape.back() = kernel.out_channels;
    ComplexSpectrum out(shape);
    const std::size_t bins = kernel.bin_count();
    const std::size_t cin = kernel.in_channels;
    const std::size_t cout = kernel.out_channels;
    const double* __restrict w = reinterpret_cast<const double*>(kernel.weights.data());
    for (std::size_t b = 0; b < truncated.batch(); ++b) {
        for (std::size_t m = 0; m < bins; ++m) {
            const Complex* in = truncated.data() + (b * bins + m) * cin;
            double* __restrict o =
                reinterpret_cast<double*>(out.data() + (b * bins + m) * cout);
            const double* wk = w + 2 * m * cin * cout;
            for (std::size_t ci = 0; ci < cin; ++ci) {
                const double xr = in[ci].real();
                const double xi = in[ci].imag();
                const double* __restrict row = wk + 2 * ci * cout;
                for (std::size_t co = 0; co < cout; ++co) {
                    const double wr = row[2 * co], wi = row[2 * co + 1];
                    o[2 * co] += wr * xr - wi * xi;
                    o[2 * co + 1] += wr * xi + wi * xr;
                }
            }
        }
    }
    return out;
}

ComplexSpectrum channel_contract_adjoint(const ComplexSpectrum& g_out,
                                         const SpectralKernel& kernel) {
    check_compatible(g_out, kernel, kernel.out_channels, "channel_contract_adjoint");
    auto shape = g_out.shape();
    shape.back() = kernel.in_channels;
    ComplexSpectrum g_in(shape);
    const std::size_t bins = kernel.bin_count();
    const std::size_t cin = kernel.in_channels;
    const std::size_t cout = kernel.out_channels;
    const double* __restrict w = reinterpret_cast<const double*>(kernel.weights.data());
    for (std::size_t b = 0; b < g_out.batch(); ++b) {
        for (std::size_t m = 0; m < bins; ++m) {
            const double* __restrict g =
                reinterpret_cast<const double*>(g_out.data() + (b * bins + m) * cout);
            Complex* o = g_in.data() + (b * bins + m) * cin;
            const double* wk = w + 2 * m * cin * cout;
            for (std::size_t ci = 0; ci < cin; ++ci) {
                const double* __restrict row = wk + 2 * ci * cout;
                double ar = 0.0, ai = 0.0;
                for (std::size_t co = 0; co < cout; ++co) {
                    const double wr = row[2 * co], wi = row[2 * co + 1];
                    const double gr = g[2 * co], gi = g[2 * co + 1];
                    // conj(w) * g
                    ar += wr * gr + wi * gi;
                    ai += wr * gi - wi * gr;
                }
                o[ci] = {ar, ai};
            }
        }
    }
    return g_in;
}

void accumulate_contract_weight_grad(const ComplexSpectrum& input, const ComplexSpectrum& g_out,
                                     const SpectralKernel& kernel,
                                     std::vector<Complex>& g_weights) {
    check_compatible(input, kernel, kernel.in_channels, "accumulate_contract_weight_grad");
    check_compatible(g_out, kernel, kernel.out_channels, "accumulate_contract_weight_grad");
    if (g_weights.size() != kernel.weights.size())
        throw std::invalid_argument("accumulate_contract_weight_grad: gradient size mismatch");
    const std::size_t bins = kernel.bin_count();
    const std::size_t cin = kernel.in_channels;
    const std::size_t cout = kernel.out_channels;
    for (std::size_t b = 0; b < input.batch(); ++b) {
        for (std::size_t m = 0; m < bins; ++m) {
            const Complex* in = input.data() + (b * bins + m) * cin;
            const double* __restrict g =
                reinterpret_cast<const double*>(g_out.data() + (b * bins + m) * cout);
            double* __restrict gw =
                reinterpret_cast<double*>(g_weights.data() + m * cin * cout);
            for (std::size_t ci = 0; ci < cin; ++ci) {
                // conj(in) * g
                const double xr = in[ci].real();
                const double xi = -in[ci].imag();
                double* __restrict row = gw + 2 * ci * cout;
                for (std::size_t co = 0; co < cout; ++co) {
                    const double gr = g[2 * co], gi = g[2 * co + 1];
                    row[2 * co] += xr * gr - xi * gi;
                    row[2 * co + 1] += xr * gi + xi * gr;
                }
            }
        }
    }
}

}  // namespace hno
