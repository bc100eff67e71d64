#pragma once

#include <vector>

#include "hno/field.hpp"

namespace hno {

// Learnable complex channel-mixing weights on the kept low-frequency bins:
// an independent (in_channels x out_channels) matrix at every kept mode.
//
// weights has shape (extents..., in_channels, out_channels), row-major, where
// extents lists the compact kept-bin extent of every spatial axis of the
// truncated spectrum the kernel is applied to. modes records the kept count
// per transformed axis (the argument handed to mode_truncate).
struct SpectralKernel {
    std::vector<std::size_t> modes;
    std::vector<std::size_t> extents;
    std::size_t in_channels = 0;
    std::size_t out_channels = 0;
    std::vector<Complex> weights;

    std::size_t bin_count() const {
        std::size_t n = 1;
        for (std::size_t e : extents) n *= e;
        return n;
    }

    void validate() const;
};

// Zero kernel for a field whose spatial axes have the given sizes, all of
// them transformed with the given kept-mode counts.
SpectralKernel make_kernel(const std::vector<std::size_t>& modes,
                           const std::vector<std::size_t>& axis_sizes, std::size_t in_channels,
                           std::size_t out_channels);

// out[b, k, :] = R[k]^T applied to in[b, k, :], independently per batch entry
// and per kept mode k.
ComplexSpectrum channel_contract(const ComplexSpectrum& truncated, const SpectralKernel& kernel);

// Reverse-mode pieces of channel_contract. Cotangents use the convention
// g = dL/dRe + i dL/dIm, under which the input cotangent is R^H g and the
// weight cotangent accumulates conj(input) * g over the batch.
ComplexSpectrum channel_contract_adjoint(const ComplexSpectrum& g_out,
                                         const SpectralKernel& kernel);
void accumulate_contract_weight_grad(const ComplexSpectrum& input, const ComplexSpectrum& g_out,
                                     const SpectralKernel& kernel,
                                     std::vector<Complex>& g_weights);

}  // namespace hno
