#pragma once

#include <complex>
#include <span>

namespace molgrating::detail {

/// Unnormalised in-place DFT, sign -1 (forward) or +1 (backward).
void fft_inplace(std::span<std::complex<double>> data, int sign);

/// Smallest size >= n of the form 2^a 3^b 5^c.
std::size_t fast_fft_size(std::size_t n);

}  // namespace molgrating::detail
