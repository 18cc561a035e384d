// Acceptance suite: one line per criterion, nonzero exit if any fails.
// Each criterion pins its tolerance in code; runtime budgets are enforced
// where the contract names one.

#include "oracles.hpp"
#include "phasepos/evolution.hpp"
#include "phasepos/positivity.hpp"
#include "phasepos/quasiprob.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace phasepos;

namespace {

const SystemParams unit = make_params(1.0, 1.0);

struct Outcome {
    bool pass = false;
    std::string detail;
};

double sup_diff(const GridField& a, const GridField& b) {
    double worst = 0.0;
    for (std::size_t k = 0; k < a.values.size(); ++k)
        worst = std::max(worst, std::abs(a.values[k] - b.values[k]));
    return worst;
}

std::string fmt(const char* pattern, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof(buf), pattern, args...);
    return buf;
}

// Shared desk-scale fixtures (built once).
struct Fixtures {
    Grid1d qg_wide = Grid1d::centered(512, 22.0);
    PhaseGrid pg_wide = PhaseGrid::centered(512, 512, 22.0, 13.0);
    DensityMatrix cat = cat_state(6.0, vacuum_family(unit), qg_wide);
    GridField cat_w0 = wigner_from_density(cat, pg_wide);

    Grid1d qg_deep = Grid1d::centered(512, 30.0);
    PhaseGrid pg_deep = PhaseGrid::centered(512, 512, 30.0, 15.0);
    DensityMatrix cat_deep = cat_state(6.0, vacuum_family(unit), qg_deep);
    GridField cat_deep_w0 = wigner_from_density(cat_deep, pg_deep);
};

Fixtures* fx = nullptr;

Outcome criterion_1_wigner_threshold() {
    const auto start = std::chrono::steady_clock::now();
    const double t = wigner_positivity_time(unit);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const double expect = 1.3160740129524924;
    const bool pass = std::abs(t - expect) <= 1e-6 && elapsed < 1.0;
    return {pass, fmt("t_W = %.9f (expect 3^(1/4) = %.9f), %.3fs", t, expect, elapsed)};
}

Outcome criterion_2_p_threshold() {
    const auto start = std::chrono::steady_clock::now();
    const PointerFamily rob = robust_alpha(unit);
    const double t = p_positivity_time(unit, rob);
    const double residual = std::abs((cw_of_t(unit, t) - c_quarter(rob)).det() - 0.25);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool pass = t >= 1.96 && t <= 1.98 && residual <= 1e-9 && elapsed < 1.0;
    return {pass, fmt("t_P = %.6f in [1.96, 1.98], det residual %.2e, %.3fs", t,
                      residual, elapsed)};
}

Outcome criterion_3_theorem_w() {
    const auto start = std::chrono::steady_clock::now();
    std::vector<double> probes;
    for (double t : {0.0, 0.25, 0.5, 0.75, 0.9, 1.0, 1.1, 1.15, 1.2, 1.25, 1.28, 1.30,
                     1.316075, 1.33, 1.4, 1.5})
        probes.push_back(t * unit.t0);
    const CertificationReport rep =
        certify_theorem_w(fx->cat, unit, probes, fx->pg_wide, "cat6");

    const double min0 = rep.probes.front().min_value;
    double min133 = 1.0;
    for (const auto& pr : rep.probes)
        if (std::abs(pr.t - 1.33 * unit.t0) < 1e-12) min133 = pr.min_value;
    const GridField w133 = evolve_wigner(fx->cat_w0, unit, 1.33 * unit.t0);
    const double eps = eps_grid(w133);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const bool pass = min0 < -0.1 && min133 >= -eps && rep.empirical_crossing >= 0.0 &&
                      rep.empirical_crossing <= (1.3161 + 0.01) * unit.t0 &&
                      rep.all_certified_past_threshold && elapsed < 30.0;
    return {pass, fmt("min W(0) = %.3f, min W(1.33 t0) = %.2e (eps %.1e), "
                      "crossing %.4f t0, %.1fs",
                      min0, min133, eps, rep.empirical_crossing / unit.t0, elapsed)};
}

Outcome criterion_4_theorem_p() {
    const auto start = std::chrono::steady_clock::now();
    const PointerFamily rob = robust_alpha(unit);

    const GridField p20 = p_from_w(fx->cat_deep_w0, rob, unit, 2.0 * unit.t0);
    const double min20 = p20.min_value();
    const double eps = eps_grid(p20);

    const double t25 = 2.5 * unit.t0;
    const GridField p25 = p_from_w(fx->cat_deep_w0, rob, unit, t25);
    const DensityMatrix rebuilt = reconstruct_density(p25, rob, fx->qg_deep);
    const DensityMatrix reference =
        density_from_wigner(evolve_wigner(fx->cat_deep_w0, unit, t25), fx->qg_deep);
    const double dist = trace_distance(rebuilt, reference);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const bool pass = min20 >= -eps && dist <= 1e-3 && elapsed < 60.0;
    return {pass, fmt("min P(2.0 t0) = %.2e (eps %.1e), trace distance %.2e, %.1fs",
                      min20, eps, dist, elapsed)};
}

Outcome criterion_5_oracle_equivalence() {
    const PhaseGrid g = PhaseGrid::centered(512, 512, 14.0, 12.0);
    const GridField cat = oracles::sample(
        g, [&](double x, double p) { return oracles::cat_wigner(x, p, 6.0, unit); },
        FieldKind::Wigner);
    const double t = unit.t0;
    const double dt_target = 0.25 * g.dp() * g.dp() / unit.D;
    const long steps = std::lround(std::ceil(t / dt_target));
    const GridField fd = fd_fokker_planck(cat, unit, t, t / steps);
    const GridField exact = evolve_wigner(cat, unit, t);
    double l1 = 0.0;
    for (std::size_t k = 0; k < fd.values.size(); ++k)
        l1 += std::abs(fd.values[k] - exact.values[k]);
    l1 *= g.cell_measure();
    return {l1 <= 1e-3, fmt("L1 = %.3e at t = t0 (%ld steps)", l1, steps)};
}

Outcome criterion_6_q_equivalence() {
    const Grid1d qg = Grid1d::centered(512, 18.0);
    const PhaseGrid g = PhaseGrid::centered(256, 256, 12.0, 12.0);
    const PointerFamily rob = robust_alpha(unit);
    const DensityMatrix corpus[] = {
        density_from_wavefunction(vacuum_state(unit, qg)),
        density_from_wavefunction(fock_state(1, unit, qg)),
        cat_state(6.0, vacuum_family(unit), qg)};
    const char* names[] = {"vacuum", "fock1", "cat"};
    double worst = 0.0;
    std::string detail;
    for (int k = 0; k < 3; ++k) {
        const GridField direct = q_direct(corpus[k], rob, g);
        const GridField smoothed = q_from_w(wigner_from_density(corpus[k], g), rob);
        const double d = sup_diff(direct, smoothed);
        worst = std::max(worst, d);
        detail += fmt("%s %.1e ", names[k], d);
    }
    return {worst <= 1e-6, "sup|q_direct - q_from_w|: " + detail};
}

Outcome criterion_7_algebra_suite() {
    std::ostringstream detail;
    bool pass = true;

    // Gaussian semigroup
    const PhaseGrid g = PhaseGrid::centered(256, 256, 12.0, 12.0);
    const CorrelationMatrix c1{0.8, 0.2, 0.6}, c2{0.5, -0.1, 0.9};
    const double semi = sup_diff(convolve(gaussian_kernel(c1, g), c2),
                                 gaussian_kernel(c1 + c2, g));
    pass = pass && semi <= 1e-10;
    detail << fmt("semigroup %.1e, ", semi);

    // det C_quarter = 1/4 across the family plane
    std::mt19937_64 rng(71);
    std::uniform_real_distribution<double> logr(-2.0, 2.0), ui(-5.0, 5.0);
    double worst_det = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const auto fam = make_family(std::pow(10.0, logr(rng)), ui(rng), unit);
        worst_det = std::max(worst_det, std::abs(c_quarter(fam).det() - 0.25));
    }
    pass = pass && worst_det <= 1e-10;
    detail << fmt("det drift %.1e, ", worst_det);

    // symplectic round trip
    const GridField f = gaussian_kernel(c1, g);
    const double rt = sup_diff(f, inverse_symplectic_fourier(symplectic_fourier(f)));
    pass = pass && rt <= 1e-10;
    detail << fmt("fourier round trip %.1e, ", rt);

    // canonical-scaling invariance
    const Grid1d qg = Grid1d::centered(256, 12.0);
    const PhaseGrid pg = PhaseGrid::centered(256, 256, 12.0, 12.0);
    const DensityMatrix vac = density_from_wavefunction(vacuum_state(unit, qg));
    const DensityMatrix cat = cat_state(6.0, vacuum_family(unit), qg);
    double worst_inv = 0.0;
    for (double a : {0.5, 2.0, 3.0}) {
        worst_inv = std::max(worst_inv, wigner_invariance_check(vac, a, pg));
        worst_inv = std::max(worst_inv, wigner_invariance_check(cat, a, pg));
    }
    pass = pass && worst_inv <= 1e-6;
    detail << fmt("scaling invariance %.1e", worst_inv);

    return {pass, detail.str()};
}

Outcome criterion_8_moment_law() {
    double worst = 0.0;
    const Grid1d& qg = fx->qg_wide;
    const GridField vac =
        wigner_from_density(density_from_wavefunction(vacuum_state(unit, qg)), fx->pg_wide);
    const GridField fock =
        wigner_from_density(density_from_wavefunction(fock_state(1, unit, qg)), fx->pg_wide);
    const std::vector<const GridField*> corpus = {&fx->cat_w0, &vac, &fock};
    for (const GridField* w0 : corpus) {
        const FieldMoments m0 = field_moments(*w0);
        for (double t : {0.5, 1.5}) {
            const FieldMoments mt = field_moments(evolve_wigner(*w0, unit, t));
            const double growth = mt.pp + mt.mean_p * mt.mean_p -
                                  (m0.pp + m0.mean_p * m0.mean_p);
            worst = std::max(worst, std::abs(growth - unit.D * t) / (unit.D * t));
        }
    }
    return {worst <= 1e-6, fmt("max relative error of <p^2> growth: %.2e", worst)};
}

Outcome criterion_9_conservation() {
    // five-operation pipeline on the cat state
    GridField f = evolve_wigner(fx->cat_w0, unit, 0.6);
    f = evolve_wigner(f, unit, 0.7);
    f = q_from_w(f, robust_alpha(unit));
    f = convolve(f, {0.2, 0.0, 0.2});
    f = shear_x(f, 0.3);
    const double drift_a = std::abs(f.integral() - 1.0);

    // and a transform-heavy one
    GridField h = convolve(fx->cat_w0, {0.5, 0.0, 0.5});
    h = inverse_symplectic_fourier(symplectic_fourier(h), h.kind);
    h = evolve_wigner(h, unit, 1.0);
    const double drift_b = std::abs(h.integral() - 1.0);

    const double worst = std::max(drift_a, drift_b);
    return {worst <= 1e-8, fmt("max normalization drift %.2e", worst)};
}

Outcome criterion_10_fock_anchor() {
    const Grid1d qg = Grid1d::centered(512, 12.0);
    const PhaseGrid g = PhaseGrid::centered(512, 512, 12.0, 12.0);
    const GridField w =
        wigner_from_density(density_from_wavefunction(fock_state(1, unit, qg)), g);
    const double v = w.at(256, 256);
    return {std::abs(v + 2.0) <= 1e-6, fmt("W(0,0) = %.9f (expect -2)", v)};
}

} // namespace

int main() {
    Fixtures fixtures;
    fx = &fixtures;

    struct Entry {
        const char* name;
        std::function<Outcome()> run;
    };
    const Entry entries[] = {
        {"Wigner threshold", criterion_1_wigner_threshold},
        {"P threshold", criterion_2_p_threshold},
        {"theorem W at desk scale", criterion_3_theorem_w},
        {"theorem P at desk scale", criterion_4_theorem_p},
        {"oracle equivalence", criterion_5_oracle_equivalence},
        {"Q equivalence", criterion_6_q_equivalence},
        {"algebra suite", criterion_7_algebra_suite},
        {"moment law", criterion_8_moment_law},
        {"conservation", criterion_9_conservation},
        {"Fock-1 anchor", criterion_10_fock_anchor},
    };

    int failures = 0;
    int index = 1;
    for (const Entry& e : entries) {
        Outcome out;
        try {
            out = e.run();
        } catch (const std::exception& ex) {
            out = {false, std::string("exception: ") + ex.what()};
        }
        std::printf("[%s] criterion %2d: %s - %s\n", out.pass ? "PASS" : "FAIL", index,
                    e.name, out.detail.c_str());
        std::fflush(stdout);
        if (!out.pass) ++failures;
        ++index;
    }
    if (failures > 0) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
