#include "phasepos/quasiprob.hpp"

#include "phasepos/evolution.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <sstream>

namespace phasepos {

SpectralField symplectic_fourier(const GridField& f) {
    if (!f.all_finite())
        throw std::domain_error("symplectic_fourier: field contains non-finite values");
    const PhaseGrid& g = f.grid;
    SpectralField s;
    s.grid = g;
    s.values.resize(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) s.values[k] = f.values[k];
    fft::dft_2d(s.values, g.nx, g.np, fft::forward);
    const double measure = g.dx() * g.dp() / two_pi;
    for (int i = 0; i < g.nx; ++i) {
        const double wx = s.omega_x(i);
        for (int j = 0; j < g.np; ++j) {
            const double wp = s.omega_p(j);
            const double phase = -(wx * g.x_min + wp * g.p_min);
            s.at(i, j) *= measure * std::complex<double>(std::cos(phase), std::sin(phase));
        }
    }
    return s;
}

GridField inverse_symplectic_fourier(const SpectralField& s, FieldKind kind) {
    const PhaseGrid& g = s.grid;
    fft::cvec buf = s.values;
    for (int i = 0; i < g.nx; ++i) {
        const double wx = s.omega_x(i);
        for (int j = 0; j < g.np; ++j) {
            const double wp = s.omega_p(j);
            const double phase = wx * g.x_min + wp * g.p_min;
            buf[static_cast<std::size_t>(i) * g.np + j] *=
                std::complex<double>(std::cos(phase), std::sin(phase));
        }
    }
    fft::dft_2d(buf, g.nx, g.np, fft::backward);
    GridField out(g, kind);
    const double scale = two_pi / (g.dx() * g.dp() * g.size());
    for (std::size_t k = 0; k < g.size(); ++k) out.values[k] = buf[k].real() * scale;
    return out;
}

GridField q_from_w(const GridField& w, const PointerFamily& family) {
    GridField q = convolve(w, c_quarter(family));
    q.kind = FieldKind::Q;
    return q;
}

GridField q_direct(const DensityMatrix& rho, const PointerFamily& family,
                   const PhaseGrid& grid) {
    const Grid1d& qg = rho.grid;
    const int nq = qg.n;
    const double dq = qg.dq();
    const double sigma = 1.0 / std::sqrt(family.alpha_r);
    if (grid.x_min - 6.0 * sigma < qg.q_min || grid.x_max + 6.0 * sigma > qg.q_max)
        throw coverage_error(
            "q_direct: q grid must cover the x range plus 6 pointer widths");

    // Spectral decomposition of rho dq; Q is the weighted sum of squared
    // pointer overlaps with each eigenvector.
    Eigen::MatrixXcd m(nq, nq);
    for (int i = 0; i < nq; ++i)
        for (int j = 0; j < nq; ++j) m(i, j) = rho.at(i, j) * dq;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("q_direct: eigendecomposition failed");
    const auto& evals = solver.eigenvalues();
    const double cut = 1e-12 * evals.cwiseAbs().maxCoeff();

    GridField q(grid, FieldKind::Q);
    const double amp = std::sqrt(family.alpha_r / two_pi);  // |(a_R/2pi)^(1/4)|^2
    const std::complex<double> alpha_conj{family.alpha_r, -family.alpha_i};
    std::vector<std::complex<double>> h(nq);
    for (int k = 0; k < nq; ++k) {
        const double mu = evals(k);
        if (std::abs(mu) <= cut) continue;
        const auto vec = solver.eigenvectors().col(k);
        for (int i = 0; i < grid.nx; ++i) {
            const double x = grid.x(i);
            for (int iq = 0; iq < nq; ++iq) {
                const double d = qg.q(iq) - x;
                // continuum-normalized eigenvector: vec / sqrt(dq); together
                // with the quadrature weight dq this leaves sqrt(dq).
                h[iq] = std::exp(-0.25 * alpha_conj * d * d) * vec(iq) * std::sqrt(dq);
            }
            for (int j = 0; j < grid.np; ++j) {
                const double p = grid.p(j);
                const std::complex<double> step{std::cos(-p * dq), std::sin(-p * dq)};
                std::complex<double> z{std::cos(-p * qg.q_min), std::sin(-p * qg.q_min)};
                std::complex<double> acc{0.0, 0.0};
                for (int iq = 0; iq < nq; ++iq) {
                    acc += h[iq] * z;
                    z *= step;
                }
                q.at(i, j) += mu * amp * std::norm(acc);
            }
        }
    }
    return q;
}

GridField p_from_w(const GridField& w0, const PointerFamily& family,
                   const SystemParams& params, double t) {
    if (t < 0.0)
        throw std::domain_error("p_from_w: t must be non-negative");
    const CorrelationMatrix diff = cw_of_t(params, t) - c_quarter(family);
    if (!diff.is_psd(1e-12)) {
        const double t_min = p_factorization_onset(params, family);
        std::ostringstream msg;
        msg << "p_from_w: coarse-graining budget C_W(t) - C_quarter is not PSD at t = "
            << t << "; minimum admissible t for this family is " << t_min;
        throw threshold_error(msg.str(), t_min);
    }
    GridField p = convolve(shear_x(w0, t / params.m), diff);
    p.kind = FieldKind::P;
    return p;
}

GridField p_deconvolve(const GridField& w, const PointerFamily& family, double cutoff) {
    if (!(cutoff > 0.0))
        throw std::domain_error("p_deconvolve: cutoff must be positive");
    const CorrelationMatrix cq = c_quarter(family);
    const PhaseGrid& g = w.grid;
    const double log_cut = std::log(cutoff);

    fft::cvec buf(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) buf[k] = w.values[k];
    fft::dft_2d(buf, g.nx, g.np, fft::forward);
    for (int i = 0; i < g.nx; ++i) {
        const double wx = fft::angular_freq(i, g.nx, g.dx());
        for (int j = 0; j < g.np; ++j) {
            const double wp = fft::angular_freq(j, g.np, g.dp());
            const double q = 0.5 * (cq.cxx * wx * wx + 2.0 * cq.cxp * wx * wp +
                                    cq.cpp * wp * wp);
            buf[static_cast<std::size_t>(i) * g.np + j] *=
                (q <= log_cut) ? std::exp(q) : 0.0;
        }
    }
    fft::dft_2d(buf, g.nx, g.np, fft::backward);

    GridField p(g, FieldKind::P);
    std::ostringstream reason;
    reason << "band-limited deconvolution: spectrum truncated where amplification "
              "exceeds "
           << cutoff;
    p.reliability = {false, reason.str()};
    const double inv_n = 1.0 / static_cast<double>(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) p.values[k] = buf[k].real() * inv_n;
    return p;
}

DensityMatrix reconstruct_density(const GridField& p, const PointerFamily& family,
                                  const Grid1d& q_grid) {
    if (!p.is_normalized(1e-6))
        throw std::domain_error("reconstruct_density: P must integrate to 1");
    const PhaseGrid& g = p.grid;
    const int nq = q_grid.n;
    const double dq = q_grid.dq();

    // rho(q, q') = sqrt(a_R/2pi) (dx/2pi) sum_x G(q,x) conj(G(q',x)) H_x(q-q')
    // with G(q,x) = exp(-alpha (q-x)^2 / 4) and H_x(r) the p-transform of the
    // row P(x, .). Lags q - q' live on the grid, so H is tabulated per row.
    const std::complex<double> alpha{family.alpha_r, family.alpha_i};
    const double amp = std::sqrt(family.alpha_r / two_pi);

    std::vector<std::complex<double>> h(static_cast<std::size_t>(g.nx) * nq);
    for (int ix = 0; ix < g.nx; ++ix) {
        for (int lag = 0; lag < nq; ++lag) {
            const double r = lag * dq;
            const std::complex<double> step{std::cos(g.dp() * r), std::sin(g.dp() * r)};
            std::complex<double> z{std::cos(g.p_min * r), std::sin(g.p_min * r)};
            std::complex<double> acc{0.0, 0.0};
            for (int j = 0; j < g.np; ++j) {
                acc += p.at(ix, j) * z;
                z *= step;
            }
            h[static_cast<std::size_t>(ix) * nq + lag] = acc * g.dp();
        }
    }

    std::vector<std::complex<double>> env(static_cast<std::size_t>(nq) * g.nx);
    for (int i = 0; i < nq; ++i)
        for (int ix = 0; ix < g.nx; ++ix) {
            const double d = q_grid.q(i) - g.x(ix);
            env[static_cast<std::size_t>(i) * g.nx + ix] = std::exp(-0.25 * alpha * d * d);
        }

    DensityMatrix rho(q_grid);
    const double weight = amp * g.dx() / two_pi;
    for (int i = 0; i < nq; ++i) {
        for (int j = i; j < nq; ++j) {
            const int lag = j - i;  // r = q_i - q_j = -lag dq, so conjugate H
            std::complex<double> acc{0.0, 0.0};
            const std::complex<double>* gi = &env[static_cast<std::size_t>(i) * g.nx];
            const std::complex<double>* gj = &env[static_cast<std::size_t>(j) * g.nx];
            for (int ix = 0; ix < g.nx; ++ix)
                acc += gi[ix] * std::conj(gj[ix]) *
                       std::conj(h[static_cast<std::size_t>(ix) * nq + lag]);
            const std::complex<double> val = weight * acc;
            rho.at(i, j) = val;
            rho.at(j, i) = std::conj(val);
        }
    }
    return rho;
}

} // namespace phasepos
