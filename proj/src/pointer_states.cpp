#include "phasepos/pointer_states.hpp"

#include <cmath>
#include <sstream>

namespace phasepos {

Grid1d::Grid1d(int n_, double q_min_, double q_max_)
    : n(n_), q_min(q_min_), q_max(q_max_) {
    if (n < 8)
        throw std::domain_error("Grid1d: need at least 8 samples");
    if (!(q_max > q_min))
        throw std::domain_error("Grid1d: empty domain");
}

double Wavefunction::norm_sq() const {
    double s = 0.0;
    for (const auto& v : values) s += std::norm(v);
    return s * grid.dq();
}

std::complex<double> inner_product(const Wavefunction& a, const Wavefunction& b) {
    if (!(a.grid == b.grid))
        throw std::invalid_argument("inner_product: grids differ");
    std::complex<double> s{0.0, 0.0};
    for (std::size_t i = 0; i < a.values.size(); ++i)
        s += std::conj(a.values[i]) * b.values[i];
    return s * a.grid.dq();
}

// ---------------------------------------------------------------------------

PointerFamily make_family(double alpha_r, double alpha_i, const SystemParams& params) {
    if (!(alpha_r > 0.0))
        throw std::domain_error("make_family: alpha_r must be positive");
    return {alpha_r, alpha_i, params};
}

PointerFamily robust_alpha(const SystemParams& params) {
    const double a = std::sqrt(2.0 * params.D * params.m);
    return {a, -a, params};
}

PointerFamily vacuum_family(const SystemParams& params) {
    return {2.0 / (params.sigma0 * params.sigma0), 0.0, params};
}

PointerFamily family_from_matrix(const CorrelationMatrix& c, const SystemParams& params,
                                 double tol) {
    if (!(c.cxx > 0.0))
        throw std::domain_error("family_from_matrix: cxx must be positive");
    if (std::abs(c.det() - 0.25) > tol)
        throw std::domain_error("family_from_matrix: determinant must be 1/4");
    return make_family(1.0 / c.cxx, -2.0 * c.cxp / c.cxx, params);
}

CorrelationMatrix c_quarter(const PointerFamily& family) {
    if (!(family.alpha_r > 0.0))
        throw std::domain_error("c_quarter: alpha_r must be positive");
    const double inv_ar = 1.0 / family.alpha_r;
    return {inv_ar, -0.5 * family.alpha_i * inv_ar, 0.25 * family.alpha_sq() * inv_ar};
}

Wavefunction pointer_wavefunction(const PointerFamily& family, const PhasePoint& gamma,
                                  const Grid1d& q_grid) {
    const double sigma = 1.0 / std::sqrt(family.alpha_r);
    if (gamma.x - 6.0 * sigma < q_grid.q_min || gamma.x + 6.0 * sigma > q_grid.q_max) {
        std::ostringstream msg;
        msg << "pointer_wavefunction: q grid must span [" << gamma.x - 6.0 * sigma
            << ", " << gamma.x + 6.0 * sigma << "]";
        throw coverage_error(msg.str());
    }
    const double amp = std::pow(family.alpha_r / two_pi, 0.25);
    Wavefunction psi;
    psi.grid = q_grid;
    psi.values.resize(q_grid.n);
    for (int i = 0; i < q_grid.n; ++i) {
        const double dq = q_grid.q(i) - gamma.x;
        const double re = -0.25 * family.alpha_r * dq * dq;
        const double im = -0.25 * family.alpha_i * dq * dq + gamma.p * dq;
        psi.values[i] = amp * std::exp(re) * std::complex<double>(std::cos(im), std::sin(im));
    }
    return psi;
}

double overlap_sq(const PointerFamily& family, const PhasePoint& g1, const PhasePoint& g2) {
    const CorrelationMatrix c = c_quarter(family);
    const double dx = g1.x - g2.x;
    const double dp = g1.p - g2.p;
    // (4C)^{-1} = adj(C) / (4 det C) = adj(C), since det C = 1/4.
    const double q = c.cpp * dx * dx - 2.0 * c.cxp * dx * dp + c.cxx * dp * dp;
    return std::exp(-q);
}

double completeness_residual(const PointerFamily& family, const PhaseGrid& gamma_grid,
                             const Grid1d& q_grid) {
    const int nq = q_grid.n;
    const double dq = q_grid.dq();
    const double d_gamma = gamma_grid.cell_measure();

    // psi_Gamma(q) conj(psi_Gamma(q')) factorizes into an X-dependent
    // envelope product and a pure phase exp(i P (q - q')), so the Gamma sum
    // splits into an envelope kernel A(q, q') and a lag sum B(q - q').
    std::vector<std::complex<double>> lag_sum(2 * nq - 1);
    for (int lag = -(nq - 1); lag <= nq - 1; ++lag) {
        const double r = lag * dq;
        std::complex<double> s{0.0, 0.0};
        for (int j = 0; j < gamma_grid.np; ++j) {
            const double P = gamma_grid.p(j);
            s += std::complex<double>(std::cos(P * r), std::sin(P * r));
        }
        lag_sum[lag + nq - 1] = s;
    }

    const double amp2 = std::sqrt(family.alpha_r / two_pi);
    const std::complex<double> alpha{family.alpha_r, family.alpha_i};

    double worst = 0.0;
    std::vector<std::complex<double>> env(nq);
    for (int i = 0; i < nq; ++i) {
        // Envelope kernel row: A(q_i, q') = amp2 * sum_X e(q_i, X) conj(e(q', X)) dX
        // with e(q, X) = exp(-alpha (q - X)^2 / 4).
        for (int k = 0; k < nq; ++k) env[k] = {0.0, 0.0};
        for (int jx = 0; jx < gamma_grid.nx; ++jx) {
            const double X = gamma_grid.x(jx);
            const double di = q_grid.q(i) - X;
            const std::complex<double> ei = std::exp(-0.25 * alpha * di * di);
            for (int k = 0; k < nq; ++k) {
                const double dk = q_grid.q(k) - X;
                env[k] += ei * std::exp(-0.25 * std::conj(alpha) * dk * dk);
            }
        }
        for (int k = 0; k < nq; ++k) {
            const std::complex<double> kernel =
                amp2 * env[k] * lag_sum[(i - k) + nq - 1] * d_gamma;
            const double target = (i == k) ? 1.0 / dq : 0.0;
            worst = std::max(worst, std::abs(kernel - target));
        }
    }
    return worst;
}

} // namespace phasepos
