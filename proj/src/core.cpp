#include "phasepos/core.hpp"

#include "phasepos/fft.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

namespace phasepos {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

} // namespace

// ---------------------------------------------------------------------------
// SystemParams

SystemParams make_params(double m, double D) {
    if (!(m > 0.0) || !(D > 0.0))
        throw std::domain_error("make_params: m and D must be strictly positive");
    SystemParams p;
    p.m = m;
    p.D = D;
    p.sigma0 = std::pow(D * m, -0.25);
    p.t0 = std::sqrt(m / D);
    return p;
}

NaturalScales natural_scales(const SystemParams& params) {
    return {params.sigma0, 1.0 / params.sigma0, params.t0};
}

// ---------------------------------------------------------------------------
// CorrelationMatrix

double CorrelationMatrix::min_eigenvalue() const {
    const double half_tr = 0.5 * (cxx + cpp);
    const double disc = std::sqrt(0.25 * (cxx - cpp) * (cxx - cpp) + cxp * cxp);
    return half_tr - disc;
}

double CorrelationMatrix::max_eigenvalue() const {
    const double half_tr = 0.5 * (cxx + cpp);
    const double disc = std::sqrt(0.25 * (cxx - cpp) * (cxx - cpp) + cxp * cxp);
    return half_tr + disc;
}

bool CorrelationMatrix::is_psd(double tol) const {
    return min_eigenvalue() >= -tol;
}

bool CorrelationMatrix::is_positive_definite(double tol) const {
    return min_eigenvalue() > tol;
}

CorrelationMatrix cw_of_t(const SystemParams& params, double t) {
    if (t < 0.0)
        throw std::domain_error("cw_of_t: t must be non-negative");
    const double m = params.m;
    const double Dt = params.D * t;
    return {Dt * t * t / (3.0 * m * m), Dt * t / (2.0 * m), Dt};
}

bool det_condition(const CorrelationMatrix& c, double tol) {
    return c.is_psd(tol) && c.det() >= 0.25 - tol;
}

// ---------------------------------------------------------------------------
// PhaseGrid / GridField

PhaseGrid::PhaseGrid(int nx_, int np_, double x_min_, double x_max_,
                     double p_min_, double p_max_)
    : nx(nx_), np(np_), x_min(x_min_), x_max(x_max_), p_min(p_min_), p_max(p_max_) {
    if (!is_power_of_two(nx) || !is_power_of_two(np) || nx < 8 || np < 8)
        throw std::domain_error("PhaseGrid: nx and np must be powers of two, >= 8");
    if (!(x_max > x_min) || !(p_max > p_min))
        throw std::domain_error("PhaseGrid: empty domain");
}

PhaseGrid PhaseGrid::centered(int nx, int np, double x_half, double p_half) {
    return PhaseGrid(nx, np, -x_half, x_half, -p_half, p_half);
}

std::string to_string(FieldKind kind) {
    switch (kind) {
        case FieldKind::Wigner: return "wigner";
        case FieldKind::Q: return "q";
        case FieldKind::P: return "p";
        case FieldKind::Generic: return "generic";
    }
    return "generic";
}

FieldKind field_kind_from_string(const std::string& s) {
    if (s == "wigner") return FieldKind::Wigner;
    if (s == "q") return FieldKind::Q;
    if (s == "p") return FieldKind::P;
    if (s == "generic") return FieldKind::Generic;
    throw std::invalid_argument("unknown field kind: " + s);
}

double GridField::integral() const {
    double s = 0.0;
    for (double v : values) s += v;
    return s * grid.cell_measure();
}

double GridField::min_value() const {
    return *std::min_element(values.begin(), values.end());
}

double GridField::max_abs() const {
    double s = 0.0;
    for (double v : values) s = std::max(s, std::abs(v));
    return s;
}

bool GridField::all_finite() const {
    for (double v : values)
        if (!std::isfinite(v)) return false;
    return true;
}

bool GridField::is_normalized(double tol) const {
    return std::abs(integral() - 1.0) <= tol;
}

FieldMoments field_moments(const GridField& f) {
    FieldMoments mo;
    double sx = 0.0, sp = 0.0, sxx = 0.0, sxp = 0.0, spp = 0.0, s = 0.0;
    for (int i = 0; i < f.grid.nx; ++i) {
        const double x = f.grid.x(i);
        for (int j = 0; j < f.grid.np; ++j) {
            const double p = f.grid.p(j);
            const double v = f.at(i, j);
            s += v;
            sx += v * x;
            sp += v * p;
            sxx += v * x * x;
            sxp += v * x * p;
            spp += v * p * p;
        }
    }
    const double w = f.grid.cell_measure();
    mo.norm = s * w;
    if (mo.norm == 0.0) return mo;
    mo.mean_x = sx / s;
    mo.mean_p = sp / s;
    mo.xx = sxx / s - mo.mean_x * mo.mean_x;
    mo.xp = sxp / s - mo.mean_x * mo.mean_p;
    mo.pp = spp / s - mo.mean_p * mo.mean_p;
    return mo;
}

double eps_grid(const GridField& f) { return eps_grid_factor * f.max_abs(); }

// ---------------------------------------------------------------------------
// Gaussian kernel

GridField gaussian_kernel(const CorrelationMatrix& c, const PhaseGrid& grid) {
    if (!c.is_positive_definite(0.0) || !(c.det() > 0.0))
        throw std::domain_error("gaussian_kernel: covariance must be strictly positive definite");
    const double sx = 6.0 * std::sqrt(c.cxx);
    const double sp = 6.0 * std::sqrt(c.cpp);
    if (grid.x_min > -sx || grid.x_max < sx || grid.p_min > -sp || grid.p_max < sp) {
        std::ostringstream msg;
        msg << "gaussian_kernel: grid must cover the 6-sigma box |x| <= " << sx
            << ", |p| <= " << sp << " (grid is [" << grid.x_min << ", " << grid.x_max
            << "] x [" << grid.p_min << ", " << grid.p_max << "])";
        throw coverage_error(msg.str());
    }
    const double det = c.det();
    const double norm = 1.0 / std::sqrt(det);
    // Gamma^T (2C)^{-1} Gamma expanded through the adjugate of C.
    const double axx = c.cpp / (2.0 * det);
    const double axp = -c.cxp / (2.0 * det);
    const double app = c.cxx / (2.0 * det);

    GridField out(grid, FieldKind::Generic);
    for (int i = 0; i < grid.nx; ++i) {
        const double x = grid.x(i);
        for (int j = 0; j < grid.np; ++j) {
            const double p = grid.p(j);
            const double q = axx * x * x + 2.0 * axp * x * p + app * p * p;
            out.at(i, j) = norm * std::exp(-q);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Spectral convolution

namespace {

/// Largest |f| inside the boundary band of width (band_x, band_p).
double boundary_band_max(const GridField& f, double band_x, double band_p) {
    const auto& g = f.grid;
    double worst = 0.0;
    for (int i = 0; i < g.nx; ++i) {
        const double x = g.x(i);
        const bool x_edge = (x - g.x_min < band_x) || (g.x_max - x <= band_x);
        for (int j = 0; j < g.np; ++j) {
            const double p = g.p(j);
            if (x_edge || (p - g.p_min < band_p) || (g.p_max - p <= band_p))
                worst = std::max(worst, std::abs(f.at(i, j)));
        }
    }
    return worst;
}

} // namespace

GridField convolve(const GridField& f, const CorrelationMatrix& c,
                   double coverage_tol) {
    if (!f.all_finite())
        throw std::domain_error("convolve: field contains non-finite values");
    const double scale = std::max(1.0, std::abs(c.cxx) + std::abs(c.cpp));
    if (!c.is_psd(1e-12 * scale))
        throw std::domain_error("convolve: covariance has a negative eigenvalue");
    if (c.is_zero()) return f;

    const auto& g = f.grid;
    const double band_x = 6.0 * std::sqrt(std::max(c.cxx, 0.0));
    const double band_p = 6.0 * std::sqrt(std::max(c.cpp, 0.0));
    if (band_x > 0.5 * (g.x_max - g.x_min) || band_p > 0.5 * (g.p_max - g.p_min)) {
        std::ostringstream msg;
        msg << "convolve: kernel 6-sigma box (" << band_x << ", " << band_p
            << ") exceeds half the domain; enlarge the grid";
        throw coverage_error(msg.str());
    }
    const double edge = boundary_band_max(f, band_x, band_p);
    const double limit = coverage_tol * f.max_abs();
    if (edge > limit) {
        std::ostringstream msg;
        msg << "convolve: field carries weight " << edge
            << " inside the boundary band the kernel would wrap (limit " << limit
            << "); enlarge the domain";
        throw coverage_error(msg.str());
    }

    fft::cvec buf(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) buf[k] = f.values[k];
    fft::dft_2d(buf, g.nx, g.np, fft::forward);
    for (int i = 0; i < g.nx; ++i) {
        const double wx = fft::angular_freq(i, g.nx, g.dx());
        for (int j = 0; j < g.np; ++j) {
            const double wp = fft::angular_freq(j, g.np, g.dp());
            const double q = c.cxx * wx * wx + 2.0 * c.cxp * wx * wp + c.cpp * wp * wp;
            buf[static_cast<std::size_t>(i) * g.np + j] *= std::exp(-0.5 * q);
        }
    }
    fft::dft_2d(buf, g.nx, g.np, fft::backward);

    GridField out(g, f.kind);
    out.reliability = f.reliability;
    const double inv_n = 1.0 / static_cast<double>(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) out.values[k] = buf[k].real() * inv_n;
    return out;
}

GridField shear_x(const GridField& f, double rate, double coverage_tol) {
    if (rate == 0.0) return f;
    const auto& g = f.grid;

    // Per-row support check: content at (x, p) moves to x + rate * p.
    const double limit = coverage_tol * f.max_abs();
    for (int j = 0; j < g.np; ++j) {
        const double shift = rate * g.p(j);
        int lo = g.nx, hi = -1;
        for (int i = 0; i < g.nx; ++i) {
            if (std::abs(f.at(i, j)) > limit) {
                lo = std::min(lo, i);
                hi = std::max(hi, i);
            }
        }
        if (hi < 0) continue;
        if (g.x(lo) + shift < g.x_min || g.x(hi) + shift >= g.x_max) {
            std::ostringstream msg;
            msg << "shear_x: row p = " << g.p(j) << " shifts support ["
                << g.x(lo) << ", " << g.x(hi) << "] by " << shift
                << " outside the domain; enlarge the x range";
            throw coverage_error(msg.str());
        }
    }

    fft::cvec buf(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) buf[k] = f.values[k];
    fft::dft_along_rows(buf, g.nx, g.np, fft::forward);
    for (int i = 0; i < g.nx; ++i) {
        const double wx = fft::angular_freq(i, g.nx, g.dx());
        for (int j = 0; j < g.np; ++j) {
            const double phase = -wx * rate * g.p(j);
            buf[static_cast<std::size_t>(i) * g.np + j] *=
                std::complex<double>(std::cos(phase), std::sin(phase));
        }
    }
    fft::dft_along_rows(buf, g.nx, g.np, fft::backward);

    GridField out(g, f.kind);
    out.reliability = f.reliability;
    const double inv_n = 1.0 / g.nx;
    for (std::size_t k = 0; k < g.size(); ++k) out.values[k] = buf[k].real() * inv_n;
    return out;
}

} // namespace phasepos
