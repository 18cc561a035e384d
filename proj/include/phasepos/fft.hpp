#pragma once

#include <complex>
#include <vector>

// Thin wrappers around FFTW double-precision complex transforms.
// All transforms are unnormalized (FFTW convention); callers divide by the
// transform length on the inverse. Plans are created with FFTW_ESTIMATE so
// repeated runs are bit-for-bit reproducible.

namespace phasepos::fft {

using cvec = std::vector<std::complex<double>>;

inline constexpr int forward = -1;
inline constexpr int backward = +1;

/// 2-D transform of a row-major (n_rows, n_cols) array, in place.
void dft_2d(cvec& data, int n_rows, int n_cols, int sign);

/// 1-D transforms along the row index (length n_rows, one per column), in place.
void dft_along_rows(cvec& data, int n_rows, int n_cols, int sign);

/// 1-D transforms along the column index (length n_cols, one per row), in place.
void dft_along_cols(cvec& data, int n_rows, int n_cols, int sign);

/// Angular frequency of DFT bin k for n samples spaced d apart.
inline double angular_freq(int k, int n, double d) {
    const int kk = (k <= n / 2) ? k : k - n;
    return 2.0 * 3.14159265358979323846 * kk / (n * d);
}

} // namespace phasepos::fft
