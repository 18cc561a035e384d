#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "phasepos/pointer_states.hpp"

#include <cmath>
#include <random>

using namespace phasepos;
using doctest::Approx;

namespace {

const SystemParams unit = make_params(1.0, 1.0);

/// Quadrature reference for |<Gamma|Gamma'>|^2, independent of the closed
/// form: sample both wave functions and integrate.
double overlap_sq_bruteforce(const PointerFamily& fam, const PhasePoint& g1,
                             const PhasePoint& g2) {
    const double sigma = 1.0 / std::sqrt(fam.alpha_r);
    const double center = 0.5 * (g1.x + g2.x);
    const double half = std::abs(g1.x - g2.x) * 0.5 + 9.0 * sigma;
    const Grid1d grid(2048, center - half, center + half);
    const Wavefunction a = pointer_wavefunction(fam, g1, grid);
    const Wavefunction b = pointer_wavefunction(fam, g2, grid);
    return std::norm(inner_product(a, b));
}

} // namespace

TEST_CASE("uncertainty matrix of a family") {
    const double r2 = std::sqrt(2.0);
    const CorrelationMatrix c = c_quarter(make_family(r2, -r2, unit));
    CHECK(c.cxx == Approx(1.0 / r2).epsilon(1e-12));
    CHECK(c.cxp == Approx(0.5).epsilon(1e-12));
    CHECK(c.cpp == Approx(1.0 / r2).epsilon(1e-12));

    const CorrelationMatrix sym = c_quarter(make_family(2.0, 0.0, unit));
    CHECK(sym.cxx == Approx(0.5).epsilon(1e-14));
    CHECK(sym.cxp == Approx(0.0));
    CHECK(sym.cpp == Approx(0.5).epsilon(1e-14));

    CHECK_THROWS_AS(make_family(0.0, 1.0, unit), std::domain_error);
    CHECK_THROWS_AS(make_family(-1.0, 1.0, unit), std::domain_error);

    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> logr(-2.0, 2.0), ui(-5.0, 5.0);
    for (int k = 0; k < 1000; ++k) {
        const PointerFamily fam =
            make_family(std::pow(10.0, logr(rng)), ui(rng), unit);
        CHECK(c_quarter(fam).det() == Approx(0.25).epsilon(1e-10));
    }
}

TEST_CASE("robust family") {
    const PointerFamily f1 = robust_alpha(unit);
    CHECK(f1.alpha_r == Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(f1.alpha_i == Approx(-std::sqrt(2.0)).epsilon(1e-14));

    const PointerFamily f2 = robust_alpha(make_params(2.0, 2.0));
    CHECK(f2.alpha_r == Approx(std::sqrt(8.0)).epsilon(1e-14));
    CHECK(f2.alpha_i == Approx(-std::sqrt(8.0)).epsilon(1e-14));

    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(0.1, 10.0);
    for (int k = 0; k < 30; ++k) {
        const SystemParams p = make_params(u(rng), u(rng));
        const CorrelationMatrix c = c_quarter(robust_alpha(p));
        const double s2 = p.sigma0 * p.sigma0;
        CHECK(c.cxx == Approx(s2 / std::sqrt(2.0)).epsilon(1e-12));
        CHECK(c.cxp == Approx(0.5).epsilon(1e-12));
        CHECK(c.cpp == Approx(1.0 / (s2 * std::sqrt(2.0))).epsilon(1e-12));
        CHECK(c.is_positive_definite(0.0));
    }
}

TEST_CASE("matrix -> family inversion closes the loop") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> logr(-1.5, 1.5), ui(-4.0, 4.0);
    for (int k = 0; k < 200; ++k) {
        const PointerFamily fam =
            make_family(std::pow(10.0, logr(rng)), ui(rng), unit);
        const PointerFamily back = family_from_matrix(c_quarter(fam), unit);
        CHECK(back.alpha_r == Approx(fam.alpha_r).epsilon(1e-10));
        CHECK(back.alpha_i == Approx(fam.alpha_i).epsilon(1e-10));
    }
    CHECK_THROWS_AS(family_from_matrix({1.0, 0.0, 1.0}, unit), std::domain_error);
    CHECK_THROWS_AS(family_from_matrix({-0.5, 0.0, -0.5}, unit), std::domain_error);
}

TEST_CASE("pointer wave functions") {
    const Grid1d grid = Grid1d::centered(512, 10.0);

    const Wavefunction fid = pointer_wavefunction(make_family(2.0, 0.0, unit),
                                                  {0.0, 0.0}, grid);
    CHECK(fid.norm_sq() == Approx(1.0).epsilon(1e-9));
    for (const auto& v : fid.values) {
        CHECK(v.imag() == 0.0);
        CHECK(v.real() >= 0.0);
    }

    // displaced packet peaks at x0
    const Wavefunction moved = pointer_wavefunction(make_family(2.0, 0.0, unit),
                                                    {3.0, 0.0}, grid);
    int peak = 0;
    for (int i = 0; i < grid.n; ++i)
        if (std::abs(moved.values[i]) > std::abs(moved.values[peak])) peak = i;
    CHECK(std::abs(grid.q(peak) - 3.0) <= 0.5 * grid.dq());

    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> ur(0.5, 4.0), ui(-2.0, 2.0), ux(-2.0, 2.0);
    for (int k = 0; k < 50; ++k) {
        const PointerFamily fam = make_family(ur(rng), ui(rng), unit);
        const Wavefunction psi =
            pointer_wavefunction(fam, {ux(rng), ux(rng)}, grid);
        CHECK(psi.norm_sq() == Approx(1.0).epsilon(1e-9));
    }

    CHECK_THROWS_AS(pointer_wavefunction(make_family(0.01, 0.0, unit), {0.0, 0.0}, grid),
                    coverage_error);
}

TEST_CASE("pointer overlaps: closed form vs quadrature") {
    const PointerFamily rob = robust_alpha(unit);
    CHECK(overlap_sq(rob, {1.3, -0.4}, {1.3, -0.4}) == Approx(1.0));

    // decays monotonically along a ray
    double prev = 1.0;
    for (int k = 1; k <= 10; ++k) {
        const double v = overlap_sq(rob, {0.0, 0.0}, {0.4 * k, 0.3 * k});
        CHECK(v < prev);
        prev = v;
    }

    // separation (1, 0): the closed form reduces to exp(-cpp)
    const double cpp = c_quarter(rob).cpp;
    CHECK(overlap_sq(rob, {0.0, 0.0}, {1.0, 0.0}) ==
          Approx(std::exp(-cpp)).epsilon(1e-12));
    CHECK(overlap_sq_bruteforce(rob, {0.0, 0.0}, {1.0, 0.0}) ==
          Approx(std::exp(-cpp)).epsilon(1e-6));

    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> ur(0.5, 4.0), ui(-2.0, 2.0), ug(-2.0, 2.0);
    for (int k = 0; k < 100; ++k) {
        const PointerFamily fam = make_family(ur(rng), ui(rng), unit);
        const PhasePoint g1{ug(rng), ug(rng)};
        const PhasePoint g2{ug(rng), ug(rng)};
        const double closed = overlap_sq(fam, g1, g2);
        const double brute = overlap_sq_bruteforce(fam, g1, g2);
        CHECK(std::abs(closed - brute) <= 1e-6);
    }
}

TEST_CASE("discretized resolution of identity") {
    const PointerFamily rob = robust_alpha(unit);
    const Grid1d q_grid = Grid1d::centered(128, 4.0);
    const double dq = q_grid.dq();

    // commensurate momentum band: P extent = 2 pi / dq
    const double p_half = M_PI / dq;
    const PhaseGrid fine(64, 512, -8.0, 8.0, -p_half, p_half);
    const double residual = completeness_residual(rob, fine, q_grid);
    CHECK(residual <= 5e-3);

    // truncated, incommensurate momentum band degrades the kernel
    const PhaseGrid coarse(64, 64, -8.0, 8.0, -5.0, 5.0);
    const double bad = completeness_residual(rob, coarse, q_grid);
    CHECK(bad > 10.0 * residual);
}
