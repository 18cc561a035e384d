#pragma once

#include "phasepos/core.hpp"
#include "phasepos/evolution.hpp"
#include "phasepos/pointer_states.hpp"
#include "phasepos/states.hpp"

#include <string>
#include <vector>

// Negativity metrics and the two decoherence-time solvers.
//
// Coarse-graining a Wigner function by a covariance C yields a non-negative
// distribution exactly when det(C) >= 1/4 (with C PSD). The dynamics
// accumulates det C_W(t) = D^2 t^4 / (12 m^2), so the Wigner function of any
// state is certified positive from t = 3^(1/4) t0 on. The P-function of a
// pointer family inherits the same criterion with budget C_W(t) - C_quarter,
// which for the robust family crosses det 1/4 near t = 1.97 t0.

namespace phasepos {

struct NegativityReport {
    double min_value = 0.0;
    double min_x = 0.0, min_p = 0.0;
    double negative_volume = 0.0;  ///< integral of |min(f, 0)| under dGamma
    bool certified_positive = false;
    double epsilon = 0.0;  ///< the -eps_grid threshold used
};

NegativityReport negativity(const GridField& f);

/// Closed form 3^(1/4) t0, where det C_W(t) reaches 1/4.
double wigner_positivity_time(const SystemParams& params);

/// Smallest t with C_W(t) - C_quarter PSD and det(C_W(t) - C_quarter) = 1/4,
/// by bisection on the determinant past the PSD onset. Works for any family
/// with alpha_R > 0; admissibility of the diffusion matrix is not needed for
/// the threshold itself.
double p_positivity_time(const SystemParams& params, const PointerFamily& family);

struct ProbeResult {
    double t = 0.0;
    bool available = true;  ///< false when the forward route does not exist yet
    double min_value = 0.0;
    double negative_volume = 0.0;
    bool certified = false;
};

struct CertificationReport {
    std::string state_name;
    std::string family_name;     ///< empty for the Wigner theorem
    double threshold = 0.0;      ///< theoretical positivity time
    double empirical_crossing = -1.0;  ///< first probe from which all certify; -1 if none
    bool all_certified_past_threshold = false;
    std::vector<ProbeResult> probes;
};

/// 64 log-spaced probe times in [0.1 t0, 4 t0].
std::vector<double> default_probe_schedule(const SystemParams& params);

/// Evolve the state's Wigner function along the probe schedule and certify
/// each probe; every probe at or past the theoretical threshold must pass.
CertificationReport certify_theorem_w(const DensityMatrix& state,
                                      const SystemParams& params,
                                      const std::vector<double>& t_probes,
                                      const PhaseGrid& grid,
                                      const std::string& state_name = "state");

/// Same for the forward-route P-function of a family. Probes below the
/// factorization onset are reported as unavailable, not as failures.
CertificationReport certify_theorem_p(const DensityMatrix& state,
                                      const SystemParams& params,
                                      const PointerFamily& family,
                                      const std::vector<double>& t_probes,
                                      const PhaseGrid& grid,
                                      const std::string& state_name = "state");

} // namespace phasepos
