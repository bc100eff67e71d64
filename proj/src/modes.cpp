#include "hno/modes.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace hno {
namespace {

void check_mode_count(std::size_t n, std::size_t m) {
    if (m < 1 || m > n / 2 + 1)
        throw std::invalid_argument("mode count " + std::to_string(m) +
                                    " out of range [1, " + std::to_string(n / 2 + 1) +
                                    "] for axis length " + std::to_string(n));
}

void check_axes(const ComplexSpectrum& s, const std::vector<std::size_t>& axes,
                std::size_t expected_extras, const char* who) {
    if (axes.size() != expected_extras)
        throw std::invalid_argument(std::string(who) + ": per-axis argument count mismatch");
    for (std::size_t a : axes)
        if (a >= s.spatial_rank())
            throw std::invalid_argument(std::string(who) + ": spatial axis " + std::to_string(a) +
                                        " out of range");
}

ComplexSpectrum truncate_axis(const ComplexSpectrum& s, std::size_t array_axis, std::size_t m) {
    const std::size_t n = s.shape()[array_axis];
    const std::vector<std::size_t> ks = kept_indices(n, m);
    if (ks.size() == n) return s;
    auto shape = s.shape();
    shape[array_axis] = ks.size();
    ComplexSpectrum out(shape);
    const std::size_t stride = s.stride(array_axis);
    const std::size_t in_block = stride * n;
    const std::size_t out_block = stride * ks.size();
    const std::size_t outer = s.size() / in_block;
    for (std::size_t o = 0; o < outer; ++o)
        for (std::size_t j = 0; j < ks.size(); ++j)
            std::copy_n(s.data() + o * in_block + ks[j] * stride, stride,
                        out.data() + o * out_block + j * stride);
    return out;
}

ComplexSpectrum pad_axis(const ComplexSpectrum& s, std::size_t array_axis, std::size_t n) {
    const std::size_t e = s.shape()[array_axis];
    if (e == n) return s;
    if (e > n || e % 2 == 0)
        throw std::invalid_argument("mode_pad: truncated extent " + std::to_string(e) +
                                    " incompatible with full size " + std::to_string(n));
    const std::size_t m = (e + 1) / 2;
    check_mode_count(n, m);
    const std::vector<std::size_t> ks = kept_indices(n, m);
    if (ks.size() != e)
        throw std::invalid_argument("mode_pad: truncated extent " + std::to_string(e) +
                                    " does not match kept-bin count for size " + std::to_string(n));
    auto shape = s.shape();
    shape[array_axis] = n;
    ComplexSpectrum out(shape);  // zero-initialized
    const std::size_t stride = s.stride(array_axis);
    const std::size_t in_block = stride * e;
    const std::size_t out_block = stride * n;
    const std::size_t outer = s.size() / in_block;
    for (std::size_t o = 0; o < outer; ++o)
        for (std::size_t j = 0; j < e; ++j)
            std::copy_n(s.data() + o * in_block + j * stride, stride,
                        out.data() + o * out_block + ks[j] * stride);
    return out;
}

}  // namespace

std::vector<std::size_t> kept_indices(std::size_t n, std::size_t m) {
    check_mode_count(n, m);
    std::vector<std::size_t> ks;
    ks.reserve(std::min(2 * m - 1, n));
    for (std::size_t k = 0; k < m; ++k) ks.push_back(k);
    for (std::size_t k = std::max(n - m + 1, m); k < n; ++k) ks.push_back(k);
    return ks;
}

std::size_t kept_count(std::size_t n, std::size_t m) {
    check_mode_count(n, m);
    return std::min(2 * m - 1, n);
}

ComplexSpectrum mode_truncate(const ComplexSpectrum& spec, const std::vector<std::size_t>& axes,
                              const std::vector<std::size_t>& modes) {
    check_axes(spec, axes, modes.size(), "mode_truncate");
    ComplexSpectrum out = spec;
    for (std::size_t i = 0; i < axes.size(); ++i) out = truncate_axis(out, axes[i] + 1, modes[i]);
    return out;
}

ComplexSpectrum mode_pad(const ComplexSpectrum& truncated, const std::vector<std::size_t>& axes,
                         const std::vector<std::size_t>& full_sizes) {
    check_axes(truncated, axes, full_sizes.size(), "mode_pad");
    ComplexSpectrum out = truncated;
    for (std::size_t i = 0; i < axes.size(); ++i) out = pad_axis(out, axes[i] + 1, full_sizes[i]);
    return out;
}

}  // namespace hno
