#include "pbv/fft.hpp"

#include <cmath>
#include <numbers>

namespace pbv {

int next_pow2(int n) {
    int p = 1;
    while (p < n) p <<= 1;
    return p;
}

void fft(std::vector<cplx>& data, bool inverse) {
    const std::size_t n = data.size();
    if (n == 0 || (n & (n - 1)) != 0) fail("fft", "length must be a power of two");
    // Bit-reversal permutation.
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(data[i], data[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        double ang = 2.0 * std::numbers::pi / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
        cplx wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                cplx u = data[i + k];
                cplx v = data[i + k + len / 2] * w;
                data[i + k] = u + v;
                data[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
    if (inverse) {
        double inv = 1.0 / static_cast<double>(n);
        for (cplx& c : data) c *= inv;
    }
}

void fft2(std::vector<cplx>& grid, int n, bool inverse) {
    if (static_cast<std::size_t>(n) * n != grid.size()) fail("fft", "grid size mismatch");
    std::vector<cplx> tmp(static_cast<std::size_t>(n));
    for (int y = 0; y < n; ++y) {
        std::copy(grid.begin() + static_cast<std::size_t>(y) * n,
                  grid.begin() + static_cast<std::size_t>(y + 1) * n, tmp.begin());
        fft(tmp, inverse);
        std::copy(tmp.begin(), tmp.end(), grid.begin() + static_cast<std::size_t>(y) * n);
    }
    for (int x = 0; x < n; ++x) {
        for (int y = 0; y < n; ++y) tmp[y] = grid[static_cast<std::size_t>(y) * n + x];
        fft(tmp, inverse);
        for (int y = 0; y < n; ++y) grid[static_cast<std::size_t>(y) * n + x] = tmp[y];
    }
}

} // namespace pbv
