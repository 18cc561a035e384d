#pragma once

#include "phasepos/core.hpp"
#include "phasepos/fft.hpp"
#include "phasepos/pointer_states.hpp"
#include "phasepos/states.hpp"

// Q- and P-functions of a Gaussian pointer family, connected to the Wigner
// function by one fixed Gaussian coarse-graining in opposite directions:
//
//   Q = g(.; C_quarter) * W        (always a probability density),
//   W = g(.; C_quarter) * P        (P generally indefinite or ill-defined).
//
// Under the symplectic Fourier transform both relations are multiplicative,
// which is how the deconvolution route and its band limit are implemented.

namespace phasepos {

/// Complex spectrum of a GridField under the symplectic Fourier transform
///   F(Gt) = integral f(Gamma) exp(-i Gt^T Gamma) dGamma,
/// with symplectic pairing Gt^T Gamma = pt x - xt p. Bins are stored in FFT
/// order, row-major over (k_x, k_p); the symplectic coordinates of bin
/// (i, j) are pt = omega_x(i), xt = -omega_p(j).
struct SpectralField {
    PhaseGrid grid;
    fft::cvec values;

    std::complex<double>& at(int i, int j) {
        return values[static_cast<std::size_t>(i) * grid.np + j];
    }
    std::complex<double> at(int i, int j) const {
        return values[static_cast<std::size_t>(i) * grid.np + j];
    }
    double omega_x(int i) const { return fft::angular_freq(i, grid.nx, grid.dx()); }
    double omega_p(int j) const { return fft::angular_freq(j, grid.np, grid.dp()); }
    double ptilde(int i) const { return omega_x(i); }
    double xtilde(int j) const { return -omega_p(j); }
};

SpectralField symplectic_fourier(const GridField& f);
GridField inverse_symplectic_fourier(const SpectralField& s,
                                     FieldKind kind = FieldKind::Generic);

/// Q = g(.; C_quarter) * W; non-negative up to grid ringing.
GridField q_from_w(const GridField& w, const PointerFamily& family);

/// Q(Gamma) = <Gamma| rho |Gamma> by direct quadrature against the pointer
/// wave functions, via the spectral decomposition of rho. The independent
/// route against which q_from_w is checked.
GridField q_direct(const DensityMatrix& rho, const PointerFamily& family,
                   const PhaseGrid& grid);

/// Forward-route P-function at time t from the initial Wigner function:
/// P(.; t) = g(.; C_W(t) - C_quarter) * w0(x - p t/m, p). Requires the kernel
/// difference to be PSD; below the onset throws threshold_error carrying the
/// minimum admissible t.
GridField p_from_w(const GridField& w0, const PointerFamily& family,
                   const SystemParams& params, double t);

/// Regularized spectral deconvolution P~ = exp(+ 1/2 Gt^T C_quarter Gt) W~,
/// truncated where the amplification would exceed cutoff. Valid only within
/// the retained band; every output is flagged unreliable, with the reason
/// recorded in the field metadata.
GridField p_deconvolve(const GridField& w, const PointerFamily& family, double cutoff);

/// Quadrature mixture rho = sum P(Gamma) |Gamma><Gamma| dGamma. p must
/// integrate to 1.
DensityMatrix reconstruct_density(const GridField& p, const PointerFamily& family,
                                  const Grid1d& q_grid);

} // namespace phasepos
