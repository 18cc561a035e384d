#include "phasepos/states.hpp"

#include "phasepos/fft.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <sstream>

namespace phasepos {

namespace {

Eigen::MatrixXcd to_eigen_trace_one(const DensityMatrix& rho) {
    const int n = rho.grid.n;
    Eigen::MatrixXcd m(n, n);
    const double dq = rho.grid.dq();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = rho.at(i, j) * dq;
    return m;
}

} // namespace

std::complex<double> DensityMatrix::trace() const {
    std::complex<double> s{0.0, 0.0};
    for (int i = 0; i < grid.n; ++i) s += at(i, i);
    return s * grid.dq();
}

double DensityMatrix::hermiticity_residual() const {
    double worst = 0.0;
    for (int i = 0; i < grid.n; ++i)
        for (int j = i; j < grid.n; ++j)
            worst = std::max(worst, std::abs(at(i, j) - std::conj(at(j, i))));
    return worst;
}

double DensityMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(to_eigen_trace_one(*this),
                                                           Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

DensityMatrix density_from_wavefunction(const Wavefunction& psi) {
    DensityMatrix rho(psi.grid);
    for (int i = 0; i < psi.grid.n; ++i)
        for (int j = 0; j < psi.grid.n; ++j)
            rho.at(i, j) = psi.values[i] * std::conj(psi.values[j]);
    return rho;
}

Wavefunction vacuum_state(const SystemParams& params, const Grid1d& q_grid) {
    return fock_state(0, params, q_grid);
}

Wavefunction fock_state(int n, const SystemParams& params, const Grid1d& q_grid) {
    if (n < 0)
        throw std::domain_error("fock_state: n must be non-negative");
    const double sigma = params.sigma0;
    if (q_grid.q_min > -6.0 * sigma || q_grid.q_max < 6.0 * sigma)
        throw coverage_error("fock_state: q grid must span at least +-6 sigma0");

    // Factorial-normalized Hermite recursion at width sigma0.
    double log_norm = -0.25 * std::log(M_PI * sigma * sigma) -
                      0.5 * n * std::log(2.0) - 0.5 * std::lgamma(n + 1.0);
    Wavefunction psi;
    psi.grid = q_grid;
    psi.values.resize(q_grid.n);
    for (int i = 0; i < q_grid.n; ++i) {
        const double xi = q_grid.q(i) / sigma;
        double h_prev = 0.0, h = 1.0;
        for (int k = 0; k < n; ++k) {
            const double h_next = 2.0 * xi * h - 2.0 * k * h_prev;
            h_prev = h;
            h = h_next;
        }
        psi.values[i] = h * std::exp(log_norm - 0.5 * xi * xi);
    }
    return psi;
}

DensityMatrix cat_state(double separation, const PointerFamily& family,
                        const Grid1d& q_grid) {
    if (!(separation > 0.0))
        throw std::domain_error("cat_state: separation must be positive");
    const Wavefunction plus =
        pointer_wavefunction(family, {0.5 * separation, 0.0}, q_grid);
    const Wavefunction minus =
        pointer_wavefunction(family, {-0.5 * separation, 0.0}, q_grid);

    Wavefunction cat;
    cat.grid = q_grid;
    cat.values.resize(q_grid.n);
    for (int i = 0; i < q_grid.n; ++i) cat.values[i] = plus.values[i] + minus.values[i];
    const double nrm = std::sqrt(cat.norm_sq());
    for (auto& v : cat.values) v /= nrm;
    return density_from_wavefunction(cat);
}

// ---------------------------------------------------------------------------
// Wigner transform pair

GridField wigner_from_density(const DensityMatrix& rho, const PhaseGrid& grid) {
    const Grid1d& qg = rho.grid;
    const int nq = qg.n;
    const double dq = qg.dq();

    double scale = 0.0;
    for (const auto& v : rho.entries) scale = std::max(scale, std::abs(v));
    if (rho.hermiticity_residual() > 1e-10 * std::max(scale, 1.0))
        throw std::domain_error("wigner_from_density: density matrix is not Hermitian");

    const double p_extent = std::max(std::abs(grid.p_min), std::abs(grid.p_max));
    if (dq > M_PI / p_extent) {
        std::ostringstream msg;
        msg << "wigner_from_density: dq = " << dq << " aliases momenta beyond "
            << M_PI / dq << "; need dq <= " << M_PI / p_extent;
        throw coverage_error(msg.str());
    }
    GridField w(grid, FieldKind::Wigner);
    for (int i = 0; i < grid.nx; ++i) {
        const double xi = grid.x(i);
        const double fidx = (xi - qg.q_min) / dq;
        const int k = static_cast<int>(std::lround(fidx));
        if (k < 0 || k >= nq || std::abs(fidx - k) > 1e-9) {
            std::ostringstream msg;
            msg << "wigner_from_density: x sample " << xi
                << " is not covered by the q grid samples";
            throw coverage_error(msg.str());
        }
        const int reach = std::min(k, nq - 1 - k);
        for (int j = 0; j < grid.np; ++j) {
            const double pj = grid.p(j);
            // r_m = 2 m dq; Hermitian pairs fold into a real cosine sum.
            const std::complex<double> step{std::cos(2.0 * pj * dq),
                                            std::sin(2.0 * pj * dq)};
            std::complex<double> z{1.0, 0.0};
            double acc = rho.at(k, k).real();
            for (int m = 1; m <= reach; ++m) {
                z *= step;
                const std::complex<double> coh = rho.at(k - m, k + m);
                acc += 2.0 * (coh.real() * z.real() - coh.imag() * z.imag());
            }
            w.at(i, j) = 2.0 * dq * acc;
        }
    }
    return w;
}

DensityMatrix density_from_wigner(const GridField& w, const Grid1d& q_grid) {
    if (!w.is_normalized(1e-6))
        throw std::domain_error("density_from_wigner: field must be normalized");
    const PhaseGrid& g = w.grid;
    const double dx = g.dx();
    const double dq = q_grid.dq();
    if (std::abs(dq - dx) > 1e-12 * dx)
        throw std::invalid_argument("density_from_wigner: q grid spacing must equal the x spacing");
    const double offset = (q_grid.q_min - g.x_min) / dx;
    const int shift = static_cast<int>(std::lround(offset));
    if (std::abs(offset - shift) > 1e-9 || shift < 0 ||
        shift + q_grid.n > g.nx)
        throw coverage_error("density_from_wigner: q grid must lie on the x samples");

    // Exact band-limited upsampling of W along x to reach midpoints
    // (q_i + q_j) / 2, which interleave the sample points.
    const int nx = g.nx, np = g.np;
    fft::cvec buf(w.values.size());
    for (std::size_t k = 0; k < buf.size(); ++k) buf[k] = w.values[k];
    fft::dft_along_rows(buf, nx, np, fft::forward);
    fft::cvec up(static_cast<std::size_t>(2 * nx) * np, {0.0, 0.0});
    for (int k = 0; k < nx; ++k) {
        int kk;
        double weight = 1.0;
        if (k < nx / 2) {
            kk = k;
        } else if (k == nx / 2) {
            kk = nx / 2;  // split the Nyquist bin symmetrically
            weight = 0.5;
        } else {
            kk = k + nx;
        }
        for (int j = 0; j < np; ++j) {
            up[static_cast<std::size_t>(kk) * np + j] +=
                weight * buf[static_cast<std::size_t>(k) * np + j];
            if (k == nx / 2)
                up[static_cast<std::size_t>(kk + nx) * np + j] +=
                    weight * buf[static_cast<std::size_t>(k) * np + j];
        }
    }
    fft::dft_along_rows(up, 2 * nx, np, fft::backward);
    const double inv_n = 1.0 / nx;

    DensityMatrix rho(q_grid);
    const double dp = g.dp();
    for (int i = 0; i < q_grid.n; ++i) {
        for (int j = i; j < q_grid.n; ++j) {
            const int mid = 2 * shift + i + j;  // index into the half-step x grid
            const double r = (j - i) * dq;
            const std::complex<double> step{std::cos(-g.dp() * r), std::sin(-g.dp() * r)};
            std::complex<double> z{std::cos(-g.p_min * r), std::sin(-g.p_min * r)};
            std::complex<double> acc{0.0, 0.0};
            const std::size_t row = static_cast<std::size_t>(mid) * np;
            for (int l = 0; l < np; ++l) {
                acc += up[row + l] * z;
                z *= step;
            }
            const std::complex<double> val = acc * (inv_n * dp / two_pi);
            rho.at(i, j) = val;
            rho.at(j, i) = std::conj(val);
        }
    }
    return rho;
}

double wigner_invariance_check(const DensityMatrix& rho, double a, const PhaseGrid& grid) {
    if (!(a > 0.0))
        throw std::domain_error("wigner_invariance_check: scale must be positive");
    const GridField w = wigner_from_density(rho, grid);

    // psi'(x') = a^{-1/2} psi(x'/a) maps rho(q, q') to rho(q/a, q'/a)/a; on
    // the scaled grid that is a pure relabeling of the same entries.
    DensityMatrix scaled(Grid1d(rho.grid.n, a * rho.grid.q_min, a * rho.grid.q_max));
    for (std::size_t k = 0; k < rho.entries.size(); ++k)
        scaled.entries[k] = rho.entries[k] / a;
    const PhaseGrid scaled_grid(grid.nx, grid.np, a * grid.x_min, a * grid.x_max,
                                grid.p_min / a, grid.p_max / a);
    const GridField w_scaled = wigner_from_density(scaled, scaled_grid);

    double worst = 0.0;
    for (std::size_t k = 0; k < w.values.size(); ++k)
        worst = std::max(worst, std::abs(w_scaled.values[k] - w.values[k]));
    return worst;
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
    if (!(a.grid == b.grid))
        throw std::invalid_argument("trace_distance: grids differ");
    Eigen::MatrixXcd diff = to_eigen_trace_one(a) - to_eigen_trace_one(b);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(diff, Eigen::EigenvaluesOnly);
    return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

} // namespace phasepos
