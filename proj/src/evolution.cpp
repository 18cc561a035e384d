#include "phasepos/evolution.hpp"

#include "phasepos/fft.hpp"

#include <cmath>
#include <complex>
#include <sstream>

namespace phasepos {

DiffusionMatrix diffusion_matrix(const PointerFamily& family) {
    if (!(family.alpha_r > 0.0))
        throw std::domain_error("diffusion_matrix: alpha_r must be positive");
    const double m = family.params.m;
    DiffusionMatrix d;
    d.dxx = -family.alpha_i / (m * family.alpha_r);
    d.dxp = family.alpha_sq() / (4.0 * m * family.alpha_r);
    d.dpp = family.params.D;
    const double scale = std::max({1.0, std::abs(d.dxx), std::abs(d.dpp)});
    d.admissible = d.as_correlation().is_psd(1e-12 * scale);
    return d;
}

CorrelationMatrix diffusion_of_t(const DiffusionMatrix& d, const SystemParams& params,
                                 double t) {
    const double m = params.m;
    return {d.dxx + d.dxp * t / m + d.dpp * t * t / (3.0 * m * m),
            d.dxp + d.dpp * t / (2.0 * m), d.dpp};
}

CorrelationMatrix p_kernel_covariance(const PointerFamily& family, double t) {
    if (t < 0.0)
        throw std::domain_error("p_kernel_covariance: t must be non-negative");
    return diffusion_of_t(diffusion_matrix(family), family.params, t).scaled(t);
}

GridField evolve_wigner(const GridField& w0, const SystemParams& params, double t) {
    if (t < 0.0)
        throw std::domain_error("evolve_wigner: t must be non-negative");
    if (t == 0.0) return w0;
    const GridField sheared = shear_x(w0, t / params.m);
    return convolve(sheared, cw_of_t(params, t));
}

double fd_max_stable_dt(const PhaseGrid& grid, const SystemParams& params) {
    const double dp = grid.dp();
    return dp * dp / (2.0 * params.D);
}

GridField fd_fokker_planck(const GridField& w0, const SystemParams& params, double t,
                           double dt) {
    if (t < 0.0)
        throw std::domain_error("fd_fokker_planck: t must be non-negative");
    if (t == 0.0) return w0;
    if (!(dt > 0.0))
        throw std::domain_error("fd_fokker_planck: dt must be positive");
    const double dt_max = fd_max_stable_dt(w0.grid, params);
    if (dt > dt_max) {
        std::ostringstream msg;
        msg << "fd_fokker_planck: explicit diffusion step unstable; need dt <= "
            << dt_max << " = dp^2 / (2 D), got " << dt;
        throw stability_error(msg.str());
    }
    const double steps_real = t / dt;
    const long steps = std::lround(steps_real);
    if (steps < 1 || std::abs(steps_real - steps) > 1e-9 * steps)
        throw std::domain_error("fd_fokker_planck: t must be an integer multiple of dt");

    // Same wraparound guards as the exact route: the total drift shears by
    // t/m and the diffusion spreads momentum by sqrt(D t).
    (void)shear_x(w0, t / params.m);
    const double band_p = 6.0 * std::sqrt(params.D * t);
    const auto& g = w0.grid;
    if (band_p > 0.5 * (g.p_max - g.p_min))
        throw coverage_error("fd_fokker_planck: diffusion width exceeds half the p range");

    // Work in the mixed representation (omega_x, p): drift is an exact
    // diagonal phase, diffusion a tridiagonal stencil along contiguous p.
    const int nx = g.nx, np = g.np;
    fft::cvec buf(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) buf[k] = w0.values[k];
    fft::dft_along_rows(buf, nx, np, fft::forward);

    fft::cvec half_drift(g.size());
    for (int i = 0; i < nx; ++i) {
        const double wx = fft::angular_freq(i, nx, g.dx());
        for (int j = 0; j < np; ++j) {
            const double phase = -wx * g.p(j) * dt / (2.0 * params.m);
            half_drift[static_cast<std::size_t>(i) * np + j] = {std::cos(phase),
                                                                std::sin(phase)};
        }
    }

    const double lam = 0.5 * params.D * dt / (g.dp() * g.dp());
    std::vector<std::complex<double>> row(np);
    for (long s = 0; s < steps; ++s) {
        for (std::size_t k = 0; k < buf.size(); ++k) buf[k] *= half_drift[k];
        for (int i = 0; i < nx; ++i) {
            std::complex<double>* f = &buf[static_cast<std::size_t>(i) * np];
            for (int j = 0; j < np; ++j) row[j] = f[j];
            for (int j = 0; j < np; ++j) {
                const int jm = (j == 0) ? np - 1 : j - 1;
                const int jp = (j == np - 1) ? 0 : j + 1;
                f[j] = row[j] + lam * (row[jp] - 2.0 * row[j] + row[jm]);
            }
        }
        for (std::size_t k = 0; k < buf.size(); ++k) buf[k] *= half_drift[k];
    }

    fft::dft_along_rows(buf, nx, np, fft::backward);
    GridField out(g, w0.kind);
    out.reliability = w0.reliability;
    const double inv_n = 1.0 / nx;
    for (std::size_t k = 0; k < g.size(); ++k) out.values[k] = buf[k].real() * inv_n;
    return out;
}

GridField evolve_p_function(const GridField& f0, const PointerFamily& family, double t) {
    if (t < 0.0)
        throw std::domain_error("evolve_p_function: t must be non-negative");
    const DiffusionMatrix d = diffusion_matrix(family);
    if (!d.admissible)
        throw std::domain_error(
            "evolve_p_function: family diffusion matrix is indefinite, so the "
            "P-function transport has no probability-flow interpretation");
    if (t == 0.0) return f0;
    const GridField sheared = shear_x(f0, t / family.params.m);
    return convolve(sheared, p_kernel_covariance(family, t));
}

double p_factorization_onset(const SystemParams& params, const PointerFamily& family) {
    const CorrelationMatrix cq = c_quarter(family);
    auto min_eig = [&](double t) { return (cw_of_t(params, t) - cq).min_eigenvalue(); };

    // dC_W/dt = D (t/m, 1)^T (t/m, 1) is rank-one PSD, so the smallest
    // eigenvalue of the difference is non-decreasing in t and a single
    // bisection bracket suffices.
    double lo = 0.0, hi = params.t0;
    while (min_eig(hi) < 0.0) hi *= 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-12 * params.t0; ++it) {
        const double mid = 0.5 * (lo + hi);
        (min_eig(mid) < 0.0 ? lo : hi) = mid;
    }
    return hi;
}

double consistency_p_vs_w(const DensityMatrix& rho0, const PointerFamily& family,
                          const PhaseGrid& grid, double t) {
    const SystemParams& params = family.params;
    const CorrelationMatrix cq = c_quarter(family);
    const CorrelationMatrix diff = cw_of_t(params, t) - cq;
    if (!diff.is_psd(1e-12)) {
        const double t_min = p_factorization_onset(params, family);
        std::ostringstream msg;
        msg << "consistency_p_vs_w: C_W(t) - C_quarter is not PSD at t = " << t
            << "; minimum admissible t is " << t_min;
        throw threshold_error(msg.str(), t_min);
    }

    const GridField w0 = wigner_from_density(rho0, grid);
    const GridField direct = evolve_wigner(w0, params, t);

    GridField p_route = shear_x(w0, t / params.m);
    p_route = convolve(p_route, diff);
    p_route = convolve(p_route, cq);

    double worst = 0.0;
    for (std::size_t k = 0; k < direct.values.size(); ++k)
        worst = std::max(worst, std::abs(direct.values[k] - p_route.values[k]));
    return worst;
}

EvolutionTracePoint trace_point(const GridField& f, double t) {
    const FieldMoments mo = field_moments(f);
    return {t, f.min_value(), mo.norm, mo.pp + mo.mean_p * mo.mean_p};
}

} // namespace phasepos
