#pragma once

#include "phasepos/core.hpp"

#include <complex>
#include <vector>

// Gaussian pointer-state families. A family is classified by a complex
// width parameter alpha with Re(alpha) > 0; its member at phase-space point
// Gamma = (x, p) has position wave function
//
//   psi_Gamma(q) = (alpha_R / 2 pi)^(1/4)
//                  exp(-alpha (q - x)^2 / 4 + i p (q - x)).
//
// The quantum uncertainty matrix of every family member is
//
//   C = (1 / alpha_R) [[1, -alpha_I / 2], [-alpha_I / 2, |alpha|^2 / 4]],
//
// whose determinant is exactly 1/4 for every admissible alpha. The family
// forms an overcomplete set resolving the identity under dGamma.

namespace phasepos {

struct PhasePoint {
    double x = 0.0;
    double p = 0.0;
};

/// Uniform 1-D position grid, half-open like PhaseGrid: q_i = q_min + i dq.
struct Grid1d {
    int n = 0;
    double q_min = 0.0, q_max = 0.0;

    Grid1d() = default;
    Grid1d(int n_, double q_min_, double q_max_);
    static Grid1d centered(int n, double q_half) { return Grid1d(n, -q_half, q_half); }

    double dq() const { return (q_max - q_min) / n; }
    double q(int i) const { return q_min + i * dq(); }

    bool operator==(const Grid1d&) const = default;
};

struct Wavefunction {
    Grid1d grid;
    std::vector<std::complex<double>> values;

    double norm_sq() const;  ///< sum |psi|^2 dq
};

/// Complex inner product <a|b> = sum conj(a) b dq (grids must match).
std::complex<double> inner_product(const Wavefunction& a, const Wavefunction& b);

// ---------------------------------------------------------------------------

struct PointerFamily {
    double alpha_r = 2.0;
    double alpha_i = 0.0;
    SystemParams params;

    double alpha_sq() const { return alpha_r * alpha_r + alpha_i * alpha_i; }
};

/// Validated constructor; alpha_r must be positive for normalizability.
PointerFamily make_family(double alpha_r, double alpha_i, const SystemParams& params);

/// The distinguished robust family alpha_0 = (1 - i) sqrt(2 D m), the one
/// singled out by environmental monitoring in position.
PointerFamily robust_alpha(const SystemParams& params);

/// Family with dimensionless width parameter 2, i.e. packets of width
/// sigma0; the vacuum convention used by the Fock-state constructors.
PointerFamily vacuum_family(const SystemParams& params);

/// Invert the uncertainty matrix relation: any symmetric positive matrix
/// with determinant 1/4 defines a unique family via alpha_R = 1 / cxx,
/// alpha_I = -2 cxp / cxx. Throws if det(C) differs from 1/4 by more than tol
/// or cxx <= 0.
PointerFamily family_from_matrix(const CorrelationMatrix& c, const SystemParams& params,
                                 double tol = 1e-9);

/// Quantum uncertainty matrix of the family; det = 1/4 identically.
CorrelationMatrix c_quarter(const PointerFamily& family);

/// Sample psi_Gamma on q_grid. The grid must span at least 6 position
/// standard deviations (sigma = 1/sqrt(alpha_R)) on both sides of x.
Wavefunction pointer_wavefunction(const PointerFamily& family, const PhasePoint& gamma,
                                  const Grid1d& q_grid);

/// Squared overlap of two family members,
/// |<Gamma|Gamma'>|^2 = exp[-(dGamma)^T (4C)^{-1} (dGamma)].
double overlap_sq(const PointerFamily& family, const PhasePoint& g1, const PhasePoint& g2);

/// Sup-norm distance between the discretized resolution of identity
/// sum_Gamma psi_Gamma(q) conj(psi_Gamma(q')) dGamma and the identity kernel
/// delta_{qq'} / dq. Small when gamma_grid samples x densely and its p range
/// is commensurate with the q-grid band (p extent = 2 pi / dq).
double completeness_residual(const PointerFamily& family, const PhaseGrid& gamma_grid,
                             const Grid1d& q_grid);

} // namespace phasepos
