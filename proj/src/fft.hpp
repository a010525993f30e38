#pragma once

#include <complex>
#include <span>
#include <vector>

namespace oamlab::detail {

// 2D complex DFT on row-major (n_y rows of n_x) data. Forward is unnormalized,
// inverse divides by n_x * n_y. Plan creation is serialized; execution is not.
void fft2d(std::span<std::complex<double>> data, std::size_t n_x, std::size_t n_y, bool inverse);

// 1D transform of each of `count` contiguous rows of length n.
void fft_rows(std::span<std::complex<double>> data, std::size_t n, std::size_t count);

}  // namespace oamlab::detail
