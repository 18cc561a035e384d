#pragma once

#include "phasepos/core.hpp"
#include "phasepos/pointer_states.hpp"

#include <complex>
#include <vector>

// Position-representation quantum states and the transform pair connecting
// them to phase space:
//
//   W(x, p) = integral of <x - r/2| rho |x + r/2> e^{i p r} dr,
//
// discretized with r on the doubled grid r_m = 2 m dq, which keeps every
// matrix element on the sampled q grid. The inverse recovers rho from W by
// the conjugate p integral at the midpoint (q + q') / 2; midpoints between
// samples are reached by exact band-limited upsampling of W along x.

namespace phasepos {

/// Position-space density matrix rho(q, q') on a uniform grid, row-major:
/// entries[i * n + j] = rho(q_i, q_j). Continuum normalization, so the trace
/// is sum of the diagonal times dq.
struct DensityMatrix {
    Grid1d grid;
    std::vector<std::complex<double>> entries;

    DensityMatrix() = default;
    explicit DensityMatrix(const Grid1d& g)
        : grid(g), entries(static_cast<std::size_t>(g.n) * g.n, {0.0, 0.0}) {}

    std::complex<double>& at(int i, int j) {
        return entries[static_cast<std::size_t>(i) * grid.n + j];
    }
    std::complex<double> at(int i, int j) const {
        return entries[static_cast<std::size_t>(i) * grid.n + j];
    }

    std::complex<double> trace() const;
    double hermiticity_residual() const;  ///< sup |rho - rho^dagger|
    double min_eigenvalue() const;        ///< of rho dq (trace-1 normalization)
};

DensityMatrix density_from_wavefunction(const Wavefunction& psi);

/// Ground Gaussian of width sigma0 (dimensionless width parameter 2).
Wavefunction vacuum_state(const SystemParams& params, const Grid1d& q_grid);

/// n-th Hermite-Gaussian excitation at the vacuum width.
Wavefunction fock_state(int n, const SystemParams& params, const Grid1d& q_grid);

/// Equal superposition of two family members at Gamma = (+-d/2, 0),
/// normalized including the overlap cross term. d must be positive.
DensityMatrix cat_state(double separation, const PointerFamily& family,
                        const Grid1d& q_grid);

/// Wigner transform of rho sampled on grid. Requires: rho Hermitian (within
/// 1e-10 of its largest entry), every grid x sample on the q grid, and
/// dq <= pi / max|p| so the r quadrature resolves every requested momentum.
GridField wigner_from_density(const DensityMatrix& rho, const PhaseGrid& grid);

/// Inverse transform. w must be normalized; the q grid must share the
/// spacing of w's x axis and lie on its sample points.
DensityMatrix density_from_wigner(const GridField& w, const Grid1d& q_grid);

/// Scale-invariance probe: apply the canonical scaling x -> a x, p -> p / a
/// to the state and the grid and return sup |W' - W|. Vanishes identically
/// for the exact transform; the discretization reproduces it to rounding.
double wigner_invariance_check(const DensityMatrix& rho, double a, const PhaseGrid& grid);

/// Trace distance (1/2) || rho1 - rho2 ||_1 of two states on the same grid.
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

} // namespace phasepos
