#pragma once

#include <vector>

#include "hno/field.hpp"

namespace hno {

// Low-frequency mode truncation. For axis length n and kept count m the
// retained bins are {0..m-1} plus the conjugate mirrors {n-m+1..n-1}, so a
// truncate/pad round trip of a real signal's spectrum stays conjugate
// symmetric. The compact layout stores kept bins in ascending bin order:
// compact index i maps to signed frequency +i for i < m and i-2m+1 after.
// That map is independent of n, which is what makes a kernel trained at one
// resolution applicable at another.

// Requires 1 <= m <= floor(n/2) + 1.
std::vector<std::size_t> kept_indices(std::size_t n, std::size_t m);
std::size_t kept_count(std::size_t n, std::size_t m);

// Compacts the kept bins along each listed spatial axis. modes[i] is the
// kept count for axes[i]; other axes are untouched.
ComplexSpectrum mode_truncate(const ComplexSpectrum& spec, const std::vector<std::size_t>& axes,
                              const std::vector<std::size_t>& modes);

// Zero-fills the discarded bins back to full_sizes[i] along axes[i].
// mode_pad and mode_truncate are mutual adjoints, and pad-after-truncate is
// an orthogonal projection.
ComplexSpectrum mode_pad(const ComplexSpectrum& truncated, const std::vector<std::size_t>& axes,
                         const std::vector<std::size_t>& full_sizes);

}  // namespace hno
