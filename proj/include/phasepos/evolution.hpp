#pragma once

#include "phasepos/core.hpp"
#include "phasepos/pointer_states.hpp"
#include "phasepos/states.hpp"

#include <vector>

// Time evolution of phase-space distributions under the position-monitoring
// master equation. The Wigner function obeys
//
//   dW/dt = -(p/m) dW/dx + (D/2) d^2 W / dp^2,
//
// solved exactly by a free-streaming shear followed by Gaussian
// coarse-graining with the accumulated covariance C_W(t). An independent
// split-step finite-difference integrator of the same equation serves as
// oracle. The P-function of a pointer family evolves by the analogous
// shear-plus-coarse-graining with the family's time-dependent diffusion
// kernel t D(t).

namespace phasepos {

/// Diffusion matrix of the P-function transport equation for a pointer
/// family. A Fokker-Planck (probability-flow) reading requires it to be
/// positive semidefinite; families failing that are returned flagged, not
/// rejected.
struct DiffusionMatrix {
    double dxx = 0.0;
    double dxp = 0.0;
    double dpp = 0.0;
    bool admissible = false;

    double det() const { return dxx * dpp - dxp * dxp; }
    CorrelationMatrix as_correlation() const { return {dxx, dxp, dpp}; }
};

/// D = [[-alpha_I/(m alpha_R), |alpha|^2/(4 m alpha_R)],
///      [|alpha|^2/(4 m alpha_R), D]]; admissible iff PSD.
DiffusionMatrix diffusion_matrix(const PointerFamily& family);

/// Time-averaged diffusion matrix D(t) entering the accumulated kernel:
/// D(t) = [[dxx + dxp t/m + dpp t^2/(3 m^2), dxp + dpp t/(2 m)],
///         [dxp + dpp t/(2 m), dpp]]. Reduces to D at t = 0.
CorrelationMatrix diffusion_of_t(const DiffusionMatrix& d, const SystemParams& params,
                                 double t);

/// Accumulated P-function coarse-graining kernel t * D(t).
CorrelationMatrix p_kernel_covariance(const PointerFamily& family, double t);

/// Exact propagator: shear x -> x - p t / m, then convolve with C_W(t).
/// t = 0 returns w0 unchanged.
GridField evolve_wigner(const GridField& w0, const SystemParams& params, double t);

/// Split-step finite-difference integrator of the same Fokker-Planck
/// equation: exact spectral drift (half step), explicit centered-difference
/// diffusion in p (full step), drift (half step). Requires t = k dt and
/// dt <= dp^2 / (2 D); the recommended oracle step is dt = 0.25 dp^2 / D.
GridField fd_fokker_planck(const GridField& w0, const SystemParams& params, double t,
                           double dt);

/// Largest stable step of the explicit diffusion update.
double fd_max_stable_dt(const PhaseGrid& grid, const SystemParams& params);

/// P-function propagator: shear then convolve with t D(t). The family's
/// diffusion matrix must be admissible.
GridField evolve_p_function(const GridField& f0, const PointerFamily& family, double t);

/// Smallest time after which C_W(t) - C_quarter is positive semidefinite,
/// i.e. the forward P-function route factorizes.
double p_factorization_onset(const SystemParams& params, const PointerFamily& family);

/// Compute W(t) along two routes - the direct propagator, and the forward
/// P-function route re-smoothed by C_quarter - and return their sup
/// distance. Throws threshold_error (carrying the minimum admissible t)
/// below the factorization onset.
double consistency_p_vs_w(const DensityMatrix& rho0, const PointerFamily& family,
                          const PhaseGrid& grid, double t);

/// One row of an evolution trace (serialized as t, min, norm, <p^2>).
struct EvolutionTracePoint {
    double t = 0.0;
    double min_value = 0.0;
    double norm = 0.0;
    double p2 = 0.0;
};

EvolutionTracePoint trace_point(const GridField& f, double t);

} // namespace phasepos
