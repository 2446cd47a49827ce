#pragma once

// Thin wrapper around FFTW's complex 3D transforms. Plans are created once
// per (n, direction) and shared; execution is thread-safe.

#include <complex>
#include <span>

namespace fracns::fft {

enum class Direction { Forward, Backward };

/// Unnormalised 3D DFT of an n^3 cube. Forward uses exp(-i k.x).
/// `in` and `out` must not alias.
void transform(int n, Direction dir, std::span<const std::complex<double>> in,
               std::span<std::complex<double>> out);

/// Worker cap from the FRNS_THREADS environment variable (default 1).
int worker_count();

}  // namespace fracns::fft
