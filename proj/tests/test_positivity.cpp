#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "phasepos/positivity.hpp"

#include <cmath>
#include <random>

using namespace phasepos;
using doctest::Approx;

namespace {

const SystemParams unit = make_params(1.0, 1.0);

} // namespace

TEST_CASE("negativity scan") {
    const PhaseGrid g = PhaseGrid::centered(256, 256, 12.0, 12.0);

    const GridField vac = oracles::sample(
        g, [&](double x, double p) { return oracles::vacuum_wigner(x, p, unit); });
    const NegativityReport nv = negativity(vac);
    CHECK(nv.negative_volume == 0.0);
    CHECK(nv.certified_positive);

    const GridField fock = oracles::sample(
        g, [&](double x, double p) { return oracles::fock1_wigner(x, p, unit); });
    const NegativityReport nf = negativity(fock);
    CHECK(nf.min_value == Approx(-2.0).epsilon(1e-6));
    CHECK(nf.min_x == Approx(0.0));
    CHECK(nf.min_p == Approx(0.0));
    CHECK_FALSE(nf.certified_positive);
    CHECK(nf.negative_volume > 0.0);

    const GridField cat = oracles::sample(
        g, [&](double x, double p) { return oracles::cat_wigner(x, p, 6.0, unit); });
    CHECK(negativity(cat).min_value < -0.1);
}

TEST_CASE("Wigner positivity threshold") {
    CHECK(wigner_positivity_time(unit) == Approx(1.316074).epsilon(1e-6));
    CHECK(wigner_positivity_time(make_params(4.0, 1.0)) ==
          Approx(2.0 * std::pow(3.0, 0.25)).epsilon(1e-12));

    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> u(0.05, 20.0);
    for (int k = 0; k < 100; ++k) {
        const SystemParams p = make_params(u(rng), u(rng));
        const double t = wigner_positivity_time(p);
        CHECK(t * std::sqrt(p.D / p.m) == Approx(std::pow(3.0, 0.25)).epsilon(1e-14));
        CHECK(cw_of_t(p, t).det() == Approx(0.25).epsilon(1e-10));
    }
}

TEST_CASE("P positivity threshold") {
    const PointerFamily rob = robust_alpha(unit);
    const double tp = p_positivity_time(unit, rob);
    CHECK(tp > 1.96);
    CHECK(tp < 1.98);

    // determinant condition is tight at the root
    CHECK(std::abs((cw_of_t(unit, tp) - c_quarter(rob)).det() - 0.25) <= 1e-9);

    // for m = D = 1 the condition reduces to a cubic in t
    const double r2 = std::sqrt(2.0);
    const double cubic = tp * tp * tp - 2.0 * r2 * tp * tp + 6.0 * tp - 6.0 * r2;
    CHECK(std::abs(cubic) <= 1e-9);

    // expanding det(C_W - C_quarter) - 1/4 and dividing by t gives that
    // cubic; its unique real root is the threshold
    CHECK(tp == Approx(1.9695).epsilon(1e-4));

    // non-robust real-alpha family: a different, finite threshold
    const PointerFamily real_fam = make_family(2.0, 0.0, unit);
    const double tp_real = p_positivity_time(unit, real_fam);
    CHECK(std::isfinite(tp_real));
    CHECK(tp_real >= wigner_positivity_time(unit));
    CHECK(std::abs((cw_of_t(unit, tp_real) - c_quarter(real_fam)).det() - 0.25) <= 1e-9);

    // coarse-graining by C_quarter always costs determinant budget
    std::mt19937_64 rng(67);
    std::uniform_real_distribution<double> ur(0.3, 4.0), ui(-2.0, 2.0), up(0.2, 4.0);
    for (int k = 0; k < 40; ++k) {
        const SystemParams p = make_params(up(rng), up(rng));
        const PointerFamily fam = make_family(ur(rng), ui(rng), p);
        CHECK(p_positivity_time(p, fam) >= wigner_positivity_time(p));
    }
}

TEST_CASE("theorem certification for the Wigner function") {
    const Grid1d qg = Grid1d::centered(512, 22.0);
    const PhaseGrid g = PhaseGrid::centered(512, 512, 22.0, 13.0);
    const DensityMatrix cat = cat_state(6.0, vacuum_family(unit), qg);

    std::vector<double> probes;
    for (double t : {0.0, 0.3, 0.6, 0.9, 1.1, 1.2, 1.3, 1.33, 1.4, 1.5})
        probes.push_back(t * unit.t0);

    const CertificationReport rep = certify_theorem_w(cat, unit, probes, g, "cat6");
    CHECK(rep.threshold == Approx(std::pow(3.0, 0.25)).epsilon(1e-12));
    CHECK_FALSE(rep.probes.front().certified);
    CHECK(rep.probes.front().min_value < -0.1);
    for (const auto& pr : rep.probes)
        if (pr.t >= rep.threshold) CHECK(pr.certified);
    CHECK(rep.all_certified_past_threshold);
    CHECK(rep.empirical_crossing >= 0.0);
    CHECK(rep.empirical_crossing <= rep.threshold + 0.01 * unit.t0);

    // smoothing by ever larger kernels cannot create negativity
    double prev = 1e300;
    for (const auto& pr : rep.probes) {
        CHECK(pr.negative_volume <= prev + 1e-12);
        prev = pr.negative_volume;
    }

    // a Gaussian state certifies on the whole schedule
    const DensityMatrix vac = density_from_wavefunction(vacuum_state(unit, qg));
    const CertificationReport rv = certify_theorem_w(vac, unit, probes, g, "vacuum");
    for (const auto& pr : rv.probes) CHECK(pr.certified);
    CHECK(rv.empirical_crossing == Approx(0.0));
}

TEST_CASE("theorem certification for the P-function") {
    const Grid1d qg = Grid1d::centered(512, 30.0);
    const PhaseGrid g = PhaseGrid::centered(512, 512, 30.0, 15.0);
    const DensityMatrix cat = cat_state(6.0, vacuum_family(unit), qg);
    const PointerFamily rob = robust_alpha(unit);

    std::vector<double> probes;
    for (double t : {1.0, 1.5, 1.8, 1.9, 2.0, 2.2, 2.5})
        probes.push_back(t * unit.t0);

    const CertificationReport rep =
        certify_theorem_p(cat, unit, rob, probes, g, "cat6");
    CHECK(rep.threshold == Approx(1.9695).epsilon(1e-4));

    // below the factorization onset the forward route does not exist
    CHECK_FALSE(rep.probes[0].available);  // t = 1.0
    CHECK_FALSE(rep.probes[1].available);  // t = 1.5
    for (std::size_t k = 2; k < rep.probes.size(); ++k)
        CHECK(rep.probes[k].available);

    for (const auto& pr : rep.probes)
        if (pr.available && pr.t >= rep.threshold) CHECK(pr.certified);
    CHECK(rep.all_certified_past_threshold);
    CHECK(rep.empirical_crossing >= 0.0);
    CHECK(rep.empirical_crossing <= rep.threshold + 0.01 * unit.t0);
}

TEST_CASE("necessity of the determinant budget, at the cat's expense") {
    const PhaseGrid g = PhaseGrid::centered(512, 512, 12.0, 12.0);
    const GridField cat = oracles::sample(
        g, [&](double x, double p) { return oracles::cat_wigner(x, p, 6.0, unit); },
        FieldKind::Wigner);

    // det slightly below 1/4: negativity survives the smoothing
    const GridField under = convolve(cat, {0.49, 0.0, 0.49});
    CHECK(under.min_value() < -eps_grid(under));

    // det at 1/4: certified positive
    const GridField at = convolve(cat, {0.5, 0.0, 0.5});
    CHECK(at.min_value() >= -eps_grid(at));
}
