#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace rfid {

enum class FftDirection { forward, backward };

/// In-place unnormalized 2D DFT of a row-major ny x nx array (Y slow).
/// Forward uses the kernel exp(-i 2 pi (k n / nx + l m / ny)); backward the
/// conjugate kernel. Plans are cached per shape and safe to use concurrently.
void fft2d(std::span<std::complex<double>> data, std::size_t nx, std::size_t ny,
           FftDirection dir);

}  // namespace rfid
