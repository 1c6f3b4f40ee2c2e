#pragma once

#include <complex>
#include <cstddef>

namespace hatk::detail {

/// In-place unnormalized DFT of n0 (1D) or n0 x n0 (2D) points; sign -1 forward, +1 inverse.
void dft_inplace(std::complex<double>* data, std::size_t n0, int dimension, int sign);

}  // namespace hatk::detail
