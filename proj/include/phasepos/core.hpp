#pragma once

#include <stdexcept>
#include <string>
#include <vector>

// Core phase-space machinery: physical parameters, 2x2 covariance algebra,
// uniform grids, Gaussian kernels and the spectral convolution engine.
//
// Conventions (natural units, hbar = 1):
//   - phase-space point Gamma = (x, p)
//   - integration measure dGamma = dx dp / (2 pi), so a normalized
//     distribution satisfies sum(values) * dx * dp / (2 pi) = 1
//   - under this measure a pure-state Wigner function is bounded by |W| <= 2
//     (the familiar 1/pi bound belongs to the plain dx dp measure)

namespace phasepos {

inline constexpr double two_pi = 6.28318530717958647692;

/// Relative tolerance used when a grid-sampled distribution is declared
/// non-negative: values >= -eps_grid_factor * max|f| pass. Spectral methods
/// ring at machine precision, so exact-zero tests are meaningless.
inline constexpr double eps_grid_factor = 1e-8;

// ---------------------------------------------------------------------------
// Errors

/// A grid does not cover the support a computation needs.
struct coverage_error : std::runtime_error {
    explicit coverage_error(const std::string& what) : std::runtime_error(what) {}
};

/// An explicit time-stepping scheme was asked to run outside its stability bound.
struct stability_error : std::runtime_error {
    explicit stability_error(const std::string& what) : std::runtime_error(what) {}
};

/// An operation was requested below the time threshold that makes it well
/// defined; t_min is the smallest admissible time.
struct threshold_error : std::domain_error {
    threshold_error(const std::string& what, double t_min_)
        : std::domain_error(what), t_min(t_min_) {}
    double t_min;
};

// ---------------------------------------------------------------------------
// Physical configuration

/// Mass and decoherence strength of the free particle monitored in position,
/// with the derived equilibrium width and decoherence timescale.
struct SystemParams {
    double m = 1.0;       ///< mass
    double D = 1.0;       ///< decoherence strength (momentum^2 / time)
    double sigma0 = 1.0;  ///< equilibrium width (D m)^(-1/4)
    double t0 = 1.0;      ///< decoherence timescale sqrt(m / D)
};

/// Build SystemParams from m and D. Throws std::domain_error unless both
/// are strictly positive.
SystemParams make_params(double m, double D);

/// Scale factors taking dimensionless quantities (x in units of sigma0,
/// p in units of 1/sigma0, t in units of t0) to natural units.
struct NaturalScales {
    double x_unit;  ///< sigma0
    double p_unit;  ///< 1 / sigma0
    double t_unit;  ///< t0
};

NaturalScales natural_scales(const SystemParams& params);

// ---------------------------------------------------------------------------
// 2x2 covariance algebra

/// Symmetric 2x2 phase-space covariance, stored as its three independent
/// entries.
struct CorrelationMatrix {
    double cxx = 0.0;
    double cxp = 0.0;
    double cpp = 0.0;

    double det() const { return cxx * cpp - cxp * cxp; }
    double trace() const { return cxx + cpp; }
    double min_eigenvalue() const;
    double max_eigenvalue() const;

    bool is_psd(double tol) const;
    bool is_positive_definite(double tol) const;
    bool is_zero() const { return cxx == 0.0 && cxp == 0.0 && cpp == 0.0; }

    CorrelationMatrix operator+(const CorrelationMatrix& o) const {
        return {cxx + o.cxx, cxp + o.cxp, cpp + o.cpp};
    }
    CorrelationMatrix operator-(const CorrelationMatrix& o) const {
        return {cxx - o.cxx, cxp - o.cxp, cpp - o.cpp};
    }
    CorrelationMatrix scaled(double s) const { return {s * cxx, s * cxp, s * cpp}; }
};

/// Covariance of the Gaussian coarse-graining accumulated by the open-system
/// dynamics after time t >= 0:
///
///   C_W(t) = D t [[t^2/(3 m^2), t/(2 m)], [t/(2 m), 1]],
///   det C_W(t) = D^2 t^4 / (12 m^2).
CorrelationMatrix cw_of_t(const SystemParams& params, double t);

/// True iff C is positive semidefinite and det(C) >= 1/4 (both up to tol):
/// the exact condition under which coarse-graining by C turns every Wigner
/// function into a non-negative distribution.
bool det_condition(const CorrelationMatrix& c, double tol = 1e-12);

// ---------------------------------------------------------------------------
// Grids and sampled fields

/// Uniform rectangular phase-space grid. Samples are half-open:
/// x_i = x_min + i dx with dx = (x_max - x_min) / nx, so the grid is the
/// natural sampling of a periodic domain and x = 0 is a sample point of a
/// centered grid. nx and np must be powers of two, at least 8.
struct PhaseGrid {
    int nx = 0;
    int np = 0;
    double x_min = 0.0, x_max = 0.0;
    double p_min = 0.0, p_max = 0.0;

    PhaseGrid() = default;
    PhaseGrid(int nx_, int np_, double x_min_, double x_max_, double p_min_,
              double p_max_);

    static PhaseGrid centered(int nx, int np, double x_half, double p_half);

    double dx() const { return (x_max - x_min) / nx; }
    double dp() const { return (p_max - p_min) / np; }
    double x(int i) const { return x_min + i * dx(); }
    double p(int j) const { return p_min + j * dp(); }
    /// Quadrature weight of one cell under dGamma = dx dp / (2 pi).
    double cell_measure() const { return dx() * dp() / two_pi; }
    std::size_t size() const { return static_cast<std::size_t>(nx) * np; }

    bool operator==(const PhaseGrid&) const = default;
};

enum class FieldKind { Wigner, Q, P, Generic };

std::string to_string(FieldKind kind);
FieldKind field_kind_from_string(const std::string& s);

/// Provenance flag carried by derived fields. Forward-route results are
/// reliable; band-limited deconvolutions are not and say why.
struct Reliability {
    bool reliable = true;
    std::string reason;
};

/// Real-valued function sampled on a PhaseGrid, row-major over (x, p):
/// values[i * np + j] = f(x_i, p_j).
struct GridField {
    PhaseGrid grid;
    std::vector<double> values;
    FieldKind kind = FieldKind::Generic;
    Reliability reliability;

    GridField() = default;
    GridField(const PhaseGrid& g, FieldKind k)
        : grid(g), values(g.size(), 0.0), kind(k) {}

    double& at(int i, int j) { return values[static_cast<std::size_t>(i) * grid.np + j]; }
    double at(int i, int j) const { return values[static_cast<std::size_t>(i) * grid.np + j]; }

    double integral() const;   ///< sum * dx dp / (2 pi)
    double min_value() const;
    double max_abs() const;
    bool all_finite() const;
    /// |integral - 1| <= tol, the normalization contract for W/Q/P fields.
    bool is_normalized(double tol = 1e-6) const;
};

/// First and second moments of a field under dGamma.
struct FieldMoments {
    double norm = 0.0;
    double mean_x = 0.0, mean_p = 0.0;
    double xx = 0.0, xp = 0.0, pp = 0.0;  ///< central second moments
};

FieldMoments field_moments(const GridField& f);

// ---------------------------------------------------------------------------
// Kernels, convolution, shear

/// Sample the normalized Gaussian kernel
///   g(Gamma; C) = det(C)^{-1/2} exp(-Gamma^T (2C)^{-1} Gamma)
/// which integrates to 1 under dGamma. C must be strictly positive definite
/// and the grid must cover +-6 standard deviations of the kernel in both
/// axis directions (the bounding box of the 6-sigma ellipse is
/// +-6 sqrt(cxx) by +-6 sqrt(cpp)).
GridField gaussian_kernel(const CorrelationMatrix& c, const PhaseGrid& grid);

/// Gaussian coarse-graining g(.; C) * f, computed spectrally: transform,
/// multiply by exp(-1/2 w^T C w), transform back. Exact for C = 0 (returns f
/// unchanged) and well defined for singular positive semidefinite C, where
/// the null eigendirection is simply not smoothed.
///
/// The periodic transform wraps around, so the call validates that the
/// kernel fits in half the domain and that f carries no weight (relative to
/// coverage_tol * max|f|) inside the boundary band the kernel would smear
/// across the edge. Violations raise coverage_error instead of aliasing.
GridField convolve(const GridField& f, const CorrelationMatrix& c,
                   double coverage_tol = 1e-6);

/// Free-streaming shear f(x, p) -> f(x - rate * p, p), applied as an exact
/// spectral phase ramp on each fixed-p row. Validates per row that the
/// shifted support stays inside the domain (same coverage_tol convention as
/// convolve).
GridField shear_x(const GridField& f, double rate, double coverage_tol = 1e-6);

/// Certification threshold for f: values >= -eps pass, with
/// eps = eps_grid_factor * max|f|.
double eps_grid(const GridField& f);

} // namespace phasepos
