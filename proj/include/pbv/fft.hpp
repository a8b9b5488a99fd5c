#pragma once

#include <complex>
#include <vector>

#include "pbv/common.hpp"

namespace pbv {

using cplx = std::complex<double>;

/// In-place radix-2 FFT; n must be a power of two. inverse=true applies the
/// 1/n factor.
void fft(std::vector<cplx>& data, bool inverse);

/// 2-D transform of a row-major n x n grid (n a power of two).
void fft2(std::vector<cplx>& grid, int n, bool inverse);

int next_pow2(int n);

} // namespace pbv
