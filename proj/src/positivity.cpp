#include "phasepos/positivity.hpp"

#include "phasepos/quasiprob.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace phasepos {

NegativityReport negativity(const GridField& f) {
    NegativityReport rep;
    rep.epsilon = eps_grid(f);
    double min_v = f.values.empty() ? 0.0 : f.values[0];
    int min_i = 0, min_j = 0;
    double neg_sum = 0.0;
    for (int i = 0; i < f.grid.nx; ++i) {
        for (int j = 0; j < f.grid.np; ++j) {
            const double v = f.at(i, j);
            if (v < min_v) {
                min_v = v;
                min_i = i;
                min_j = j;
            }
            if (v < 0.0) neg_sum -= v;
        }
    }
    rep.min_value = min_v;
    rep.min_x = f.grid.x(min_i);
    rep.min_p = f.grid.p(min_j);
    rep.negative_volume = neg_sum * f.grid.cell_measure();
    rep.certified_positive = min_v >= -rep.epsilon;
    return rep;
}

double wigner_positivity_time(const SystemParams& params) {
    return std::pow(3.0, 0.25) * params.t0;
}

double p_positivity_time(const SystemParams& params, const PointerFamily& family) {
    const CorrelationMatrix cq = c_quarter(family);
    auto residual = [&](double t) { return (cw_of_t(params, t) - cq).det() - 0.25; };

    // Past the PSD onset the budget matrix grows in the Loewner order, so
    // its determinant is monotone there and bisection is safe.
    double lo = p_factorization_onset(params, family);
    double hi = std::max(10.0 * params.t0, 2.0 * lo);
    while (residual(hi) < 0.0) hi *= 2.0;
    if (residual(lo) >= 0.0) return lo;
    while (hi - lo > 1e-10 * params.t0) {
        const double mid = 0.5 * (lo + hi);
        (residual(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

std::vector<double> default_probe_schedule(const SystemParams& params) {
    const int n = 64;
    const double lo = 0.1 * params.t0, hi = 4.0 * params.t0;
    std::vector<double> ts(n);
    for (int k = 0; k < n; ++k)
        ts[k] = lo * std::pow(hi / lo, static_cast<double>(k) / (n - 1));
    return ts;
}

namespace {

CertificationReport certify(const DensityMatrix& state, const SystemParams& params,
                            const std::vector<double>& t_probes, const PhaseGrid& grid,
                            double threshold, const PointerFamily* family,
                            const std::string& state_name,
                            const std::string& family_name) {
    CertificationReport rep;
    rep.state_name = state_name;
    rep.family_name = family_name;
    rep.threshold = threshold;

    std::vector<double> ts = t_probes;
    std::sort(ts.begin(), ts.end());
    const GridField w0 = wigner_from_density(state, grid);

    for (double t : ts) {
        ProbeResult pr;
        pr.t = t;
        if (family != nullptr) {
            try {
                const GridField p = p_from_w(w0, *family, params, t);
                const NegativityReport nr = negativity(p);
                pr.min_value = nr.min_value;
                pr.negative_volume = nr.negative_volume;
                pr.certified = nr.certified_positive;
            } catch (const threshold_error&) {
                pr.available = false;
            }
        } else {
            const GridField w = evolve_wigner(w0, params, t);
            const NegativityReport nr = negativity(w);
            pr.min_value = nr.min_value;
            pr.negative_volume = nr.negative_volume;
            pr.certified = nr.certified_positive;
        }
        rep.probes.push_back(pr);
    }

    // Empirical crossing: earliest available probe that certifies and after
    // which every later available probe also certifies.
    rep.empirical_crossing = -1.0;
    for (std::size_t k = 0; k < rep.probes.size(); ++k) {
        if (!rep.probes[k].available || !rep.probes[k].certified) continue;
        bool all_ok = true;
        for (std::size_t l = k + 1; l < rep.probes.size(); ++l)
            if (rep.probes[l].available && !rep.probes[l].certified) all_ok = false;
        if (all_ok) {
            rep.empirical_crossing = rep.probes[k].t;
            break;
        }
    }

    rep.all_certified_past_threshold = true;
    for (const ProbeResult& pr : rep.probes)
        if (pr.t >= threshold && pr.available && !pr.certified)
            rep.all_certified_past_threshold = false;
    return rep;
}

} // namespace

CertificationReport certify_theorem_w(const DensityMatrix& state,
                                      const SystemParams& params,
                                      const std::vector<double>& t_probes,
                                      const PhaseGrid& grid,
                                      const std::string& state_name) {
    return certify(state, params, t_probes, grid, wigner_positivity_time(params),
                   nullptr, state_name, "");
}

CertificationReport certify_theorem_p(const DensityMatrix& state,
                                      const SystemParams& params,
                                      const PointerFamily& family,
                                      const std::vector<double>& t_probes,
                                      const PhaseGrid& grid,
                                      const std::string& state_name) {
    std::ostringstream fam;
    fam << "alpha=(" << family.alpha_r << "," << family.alpha_i << ")";
    return certify(state, params, t_probes, grid, p_positivity_time(params, family),
                   &family, state_name, fam.str());
}

} // namespace phasepos
