// phasepos - batch runner for the phase-space positivity pipeline.
//
// Subcommands: decoherence-times, evolve, certify-w, certify-p,
// oracle-compare, sweep. Lengths are in units of sigma0, momenta in
// 1/sigma0, times in t0, so the same flags mean the same physics for any
// (m, D). A JSON config file supplies defaults; command-line flags win.
//
// Exit codes: 0 success, 2 validation error, 3 numerical-contract violation.

#include "phasepos/core.hpp"
#include "phasepos/evolution.hpp"
#include "phasepos/io.hpp"
#include "phasepos/pointer_states.hpp"
#include "phasepos/positivity.hpp"
#include "phasepos/quasiprob.hpp"
#include "phasepos/states.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace phasepos;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_validation = 2;
constexpr int exit_contract = 3;

struct validation_failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct contract_failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Configuration: defaults < config file < command line.

struct Options {
    double m = 1.0;
    double d = 1.0;
    std::string state;        // cat | vacuum | fock1
    double sep = 6.0;         // cat separation, units of sigma0
    std::string family = "robust";  // robust | vacuum | custom
    double alpha_r = 0.0;     // used when family == custom
    double alpha_i = 0.0;
    int grid = 512;
    double x_half = 0.0;      // units of sigma0; 0 = auto
    double p_half = 0.0;      // units of 1/sigma0; 0 = auto
    double t = -1.0;          // units of t0
    double tmax = -1.0;       // probe schedule end, units of t0
    int probes = 64;
    double cutoff = 1e6;
    long seed = 0;            // recorded in the config hash; no RNG downstream
    int threads = 0;          // 0 = hardware
    std::string out = "phasepos_out";

    json to_json() const {
        return json{{"m", m},           {"d", d},         {"state", state},
                    {"sep", sep},       {"family", family}, {"alpha_r", alpha_r},
                    {"alpha_i", alpha_i}, {"grid", grid},  {"x_half", x_half},
                    {"p_half", p_half}, {"t", t},         {"tmax", tmax},
                    {"probes", probes}, {"cutoff", cutoff}, {"seed", seed},
                    {"threads", threads}, {"out", out}};
    }
};

void apply_config_file(Options& o, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_failure("cannot open config file: " + path);
    json cfg;
    try {
        cfg = json::parse(in);
    } catch (const json::exception& e) {
        throw validation_failure(std::string("config file is not valid JSON: ") + e.what());
    }
    auto get = [&](const char* key, auto& field) {
        if (cfg.contains(key)) field = cfg.at(key).get<std::decay_t<decltype(field)>>();
    };
    get("m", o.m);
    get("d", o.d);
    get("state", o.state);
    get("sep", o.sep);
    get("family", o.family);
    get("alpha_r", o.alpha_r);
    get("alpha_i", o.alpha_i);
    get("grid", o.grid);
    get("x_half", o.x_half);
    get("p_half", o.p_half);
    get("t", o.t);
    get("tmax", o.tmax);
    get("probes", o.probes);
    get("cutoff", o.cutoff);
    get("seed", o.seed);
    get("threads", o.threads);
    get("out", o.out);
}

void require_keys(const Options& o, bool need_state, bool need_t) {
    std::vector<std::string> missing;
    if (need_state && o.state.empty()) missing.push_back("state");
    if (need_t && !(o.t >= 0.0)) missing.push_back("t");
    if (o.family == "custom" && !(o.alpha_r > 0.0)) missing.push_back("alpha_r");
    if (!missing.empty()) {
        std::string msg = "missing required config keys:";
        for (const auto& k : missing) msg += " " + k;
        throw validation_failure(msg);
    }
}

int thread_cap(const Options& o) {
    if (const char* env = std::getenv("PHASEPOS_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    if (o.threads > 0) return o.threads;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

// ---------------------------------------------------------------------------
// Scene construction

PointerFamily family_from_options(const Options& o, const SystemParams& params) {
    if (o.family == "robust") return robust_alpha(params);
    if (o.family == "vacuum") return vacuum_family(params);
    if (o.family == "custom") return make_family(o.alpha_r, o.alpha_i, params);
    throw validation_failure("unknown family: " + o.family +
                             " (expected robust, vacuum or custom)");
}

struct Scene {
    SystemParams params;
    PointerFamily family;
    PhaseGrid grid;
    Grid1d q_grid;
    DensityMatrix state;
    std::string state_name;
};

/// Domain large enough that shearing to t_hor and smoothing by C_W(t_hor)
/// stay clear of the periodic boundary, with the sampling fine enough for
/// the momentum content.
PhaseGrid auto_grid(const Options& o, const SystemParams& params,
                    const PointerFamily& cat_family, double t_hor) {
    const double s0 = params.sigma0;
    double x0, p0;  // support radius of the initial state
    if (o.state == "cat") {
        const double sx = 1.0 / std::sqrt(cat_family.alpha_r);
        const double sp = std::sqrt(c_quarter(cat_family).cpp);
        x0 = 0.5 * o.sep * s0 + 7.0 * sx;
        p0 = 7.0 * sp;
    } else {
        x0 = 8.0 * s0;
        p0 = 8.0 / s0;
    }
    double x_half = o.x_half > 0.0 ? o.x_half * s0 : 0.0;
    double p_half = o.p_half > 0.0 ? o.p_half / s0 : 0.0;
    if (x_half <= 0.0 || p_half <= 0.0) {
        const CorrelationMatrix cw = cw_of_t(params, t_hor);
        if (x_half <= 0.0)
            x_half = x0 + p0 * t_hor / params.m + 6.0 * std::sqrt(cw.cxx) + s0;
        if (p_half <= 0.0) p_half = p0 + 6.0 * std::sqrt(cw.cpp) + 1.0 / s0;
    }
    int n = o.grid;
    // keep dq below the aliasing bound pi / p_max with some headroom
    while (2.0 * x_half / n > 0.75 * M_PI / p_half) n *= 2;
    if (n != o.grid)
        std::cerr << "note: grid refined to " << n << " to resolve |p| <= " << p_half
                  << "\n";
    return PhaseGrid::centered(n, n, x_half, p_half);
}

Scene build_scene(const Options& o, double t_hor) {
    Scene sc;
    sc.params = make_params(o.m, o.d);
    sc.family = family_from_options(o, sc.params);
    const PointerFamily packet = vacuum_family(sc.params);
    sc.grid = auto_grid(o, sc.params, packet, t_hor);
    sc.q_grid = Grid1d(sc.grid.nx, sc.grid.x_min, sc.grid.x_max);

    if (o.state == "cat") {
        sc.state = cat_state(o.sep * sc.params.sigma0, packet, sc.q_grid);
    } else if (o.state == "vacuum") {
        sc.state = density_from_wavefunction(vacuum_state(sc.params, sc.q_grid));
    } else if (o.state == "fock1") {
        sc.state = density_from_wavefunction(fock_state(1, sc.params, sc.q_grid));
    } else {
        throw validation_failure("unknown state: " + o.state +
                                 " (expected cat, vacuum or fock1)");
    }
    sc.state_name = o.state;
    return sc;
}

// ---------------------------------------------------------------------------
// Output plumbing

struct Workspace {
    fs::path dir;
    std::string config_hash;
    std::vector<std::string> artifacts;

    std::string path(const std::string& name) {
        artifacts.push_back(name);
        return (dir / name).string();
    }
};

Workspace open_workspace(const Options& o, const std::string& subcommand) {
    Workspace ws;
    ws.dir = o.out;
    fs::create_directories(ws.dir);
    json cfg = o.to_json();
    cfg["subcommand"] = subcommand;
    ws.config_hash = io::fnv1a_hex(cfg.dump());
    return ws;
}

void write_manifest(const Workspace& ws, const Options& o, const std::string& subcommand) {
    json m{{"subcommand", subcommand},
           {"config", o.to_json()},
           {"config_hash", ws.config_hash},
           {"artifacts", ws.artifacts}};
    std::ofstream out(ws.dir / "manifest.json", std::ios::binary);
    out << m.dump(2) << '\n';
}

std::vector<double> probe_schedule(const SystemParams& params, int n, double tmax_t0) {
    const double lo = 0.1 * params.t0, hi = tmax_t0 * params.t0;
    std::vector<double> ts(n);
    for (int k = 0; k < n; ++k)
        ts[k] = lo * std::pow(hi / lo, static_cast<double>(k) / (n - 1));
    return ts;
}

// ---------------------------------------------------------------------------
// Subcommands

int run_decoherence_times(const Options& o) {
    const SystemParams params = make_params(o.m, o.d);
    const PointerFamily family = family_from_options(o, params);
    const double tw = wigner_positivity_time(params);
    const double tp = p_positivity_time(params, family);
    const CorrelationMatrix cq = c_quarter(family);
    const DiffusionMatrix dm = diffusion_matrix(family);

    std::printf("t_W = %.6f  (t_W / t0 = %.6f)\n", tw, tw / params.t0);
    std::printf("t_P = %.6f  (t_P / t0 = %.6f)\n", tp, tp / params.t0);
    std::printf("family: alpha = (%.9g, %.9g)\n", family.alpha_r, family.alpha_i);
    std::printf("        C_quarter = [[%.9g, %.9g], [%.9g, %.9g]], det = %.12g\n",
                cq.cxx, cq.cxp, cq.cxp, cq.cpp, cq.det());
    std::printf("        diffusion matrix admissible: %s\n", dm.admissible ? "yes" : "no");
    return exit_ok;
}

int run_evolve(const Options& o) {
    require_keys(o, true, true);
    const double t = o.t;  // units of t0
    Scene sc = build_scene(o, std::max(t, 1e-6));
    Workspace ws = open_workspace(o, "evolve");
    const double t_nat = t * sc.params.t0;

    const GridField w0 = wigner_from_density(sc.state, sc.grid);
    const GridField wt = evolve_wigner(w0, sc.params, t_nat);
    if (std::abs(wt.integral() - 1.0) > 1e-8)
        throw contract_failure("evolved Wigner function lost normalization");

    std::vector<EvolutionTracePoint> trace;
    const int n_pts = std::max(2, std::min(o.probes, 64));
    for (int k = 0; k < n_pts; ++k) {
        const double tk = t_nat * k / (n_pts - 1);
        trace.push_back(trace_point(evolve_wigner(w0, sc.params, tk), tk));
    }

    io::write_grid_field(w0, sc.params, (ws.dir / (sc.state_name + "_w0")).string(),
                         ws.config_hash);
    ws.artifacts.push_back(sc.state_name + "_w0.csv");
    ws.artifacts.push_back(sc.state_name + "_w0.json");
    io::write_grid_field(wt, sc.params, (ws.dir / (sc.state_name + "_wt")).string(),
                         ws.config_hash);
    ws.artifacts.push_back(sc.state_name + "_wt.csv");
    ws.artifacts.push_back(sc.state_name + "_wt.json");
    io::write_trace_csv(trace, ws.path("trace.csv"));
    write_manifest(ws, o, "evolve");

    std::printf("evolved %s to t = %.6g t0: min = %.6g, norm = %.12g\n",
                sc.state_name.c_str(), t, wt.min_value(), wt.integral());
    return exit_ok;
}

int run_certify(const Options& o, bool p_theorem) {
    require_keys(o, true, false);
    const double tmax = o.tmax > 0.0 ? o.tmax : (p_theorem ? 3.0 : 2.0);
    Scene sc = build_scene(o, tmax);
    Workspace ws = open_workspace(o, p_theorem ? "certify-p" : "certify-w");
    const auto ts = probe_schedule(sc.params, std::max(2, o.probes), tmax);

    const CertificationReport rep =
        p_theorem ? certify_theorem_p(sc.state, sc.params, sc.family, ts, sc.grid,
                                      sc.state_name)
                  : certify_theorem_w(sc.state, sc.params, ts, sc.grid, sc.state_name);

    io::write_report_json(rep, ws.path(p_theorem ? "certify_p.json" : "certify_w.json"),
                          ws.config_hash);
    write_manifest(ws, o, p_theorem ? "certify-p" : "certify-w");

    std::printf("theoretical threshold: t = %.6f (%.6f t0)\n", rep.threshold,
                rep.threshold / sc.params.t0);
    if (rep.empirical_crossing >= 0.0)
        std::printf("empirical crossing:    t = %.6f (%.6f t0)\n", rep.empirical_crossing,
                    rep.empirical_crossing / sc.params.t0);
    else
        std::printf("empirical crossing:    none within the probe schedule\n");
    for (const auto& pr : rep.probes) {
        if (!pr.available)
            std::printf("  t = %8.5f  forward route unavailable\n", pr.t);
        else
            std::printf("  t = %8.5f  min = %12.5g  negvol = %10.4g  %s\n", pr.t,
                        pr.min_value, pr.negative_volume,
                        pr.certified ? "certified" : "negative");
    }
    if (!rep.all_certified_past_threshold)
        throw contract_failure("a probe past the theoretical threshold failed certification");
    if (rep.empirical_crossing >= 0.0 &&
        rep.empirical_crossing > rep.threshold + 0.01 * sc.params.t0)
        throw contract_failure("empirical crossing exceeds the theoretical bound");
    return exit_ok;
}

int run_oracle_compare(const Options& o) {
    require_keys(o, true, true);
    Scene sc = build_scene(o, o.t);
    const double t_nat = o.t * sc.params.t0;

    const GridField w0 = wigner_from_density(sc.state, sc.grid);
    const GridField exact = evolve_wigner(w0, sc.params, t_nat);
    const double dt_target = 0.25 * sc.grid.dp() * sc.grid.dp() / sc.params.D;
    const long steps = std::max(1l, std::lround(std::ceil(t_nat / dt_target)));
    const GridField fd = fd_fokker_planck(w0, sc.params, t_nat, t_nat / steps);

    double l1 = 0.0;
    for (std::size_t k = 0; k < exact.values.size(); ++k)
        l1 += std::abs(exact.values[k] - fd.values[k]);
    l1 *= sc.grid.cell_measure();

    std::printf("L1 distance (analytic vs finite-difference) at t = %.6g t0: %.6g\n", o.t,
                l1);
    if (l1 > 1e-3)
        throw contract_failure("oracle disagreement: L1 above 1e-3");
    return exit_ok;
}

struct SweepAxis {
    double lo = 1.0, hi = 1.0;
    int n = 1;
};

SweepAxis parse_axis(const std::string& spec) {
    SweepAxis ax;
    if (spec.empty()) return ax;
    const auto c1 = spec.find(':');
    const auto c2 = spec.find(':', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
        throw validation_failure("range must be lo:hi:n, got " + spec);
    ax.lo = std::strtod(spec.c_str(), nullptr);
    ax.hi = std::strtod(spec.c_str() + c1 + 1, nullptr);
    ax.n = std::atoi(spec.c_str() + c2 + 1);
    if (ax.n < 1 || !(ax.hi >= ax.lo) || !(ax.lo > 0.0))
        throw validation_failure("invalid range: " + spec);
    return ax;
}

double axis_value(const SweepAxis& ax, int k) {
    if (ax.n == 1) return ax.lo;
    return ax.lo + (ax.hi - ax.lo) * k / (ax.n - 1);
}

int run_sweep(const Options& o, const std::string& m_range, const std::string& d_range) {
    const SweepAxis ma = parse_axis(m_range.empty() ? "1:1:1" : m_range);
    const SweepAxis da = parse_axis(d_range.empty() ? "1:1:1" : d_range);
    Workspace ws = open_workspace(o, "sweep");

    struct Row {
        double m, d, tw, tp, ar, ai;
    };
    const int total = ma.n * da.n;
    std::vector<Row> rows(total);
    std::atomic<int> next{0};
    auto worker = [&]() {
        for (int k; (k = next.fetch_add(1)) < total;) {
            const double m = axis_value(ma, k / da.n);
            const double d = axis_value(da, k % da.n);
            const SystemParams params = make_params(m, d);
            Options po = o;
            po.m = m;
            po.d = d;
            const PointerFamily fam = family_from_options(po, params);
            rows[k] = {m, d, wigner_positivity_time(params),
                       p_positivity_time(params, fam), fam.alpha_r, fam.alpha_i};
        }
    };
    const int n_threads = std::min(thread_cap(o), total);
    std::vector<std::thread> pool;
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    std::ofstream csv(ws.dir / "sweep.csv", std::ios::binary);
    csv << "index,m,D,t_wigner,t_p,alpha_r,alpha_i\n";
    for (int k = 0; k < total; ++k)
        csv << k << ',' << io::format_double(rows[k].m) << ','
            << io::format_double(rows[k].d) << ',' << io::format_double(rows[k].tw) << ','
            << io::format_double(rows[k].tp) << ',' << io::format_double(rows[k].ar)
            << ',' << io::format_double(rows[k].ai) << '\n';
    csv.close();
    ws.artifacts.push_back("sweep.csv");
    write_manifest(ws, o, "sweep");
    std::printf("swept %d points (%d threads) -> %s\n", total, n_threads,
                (ws.dir / "sweep.csv").string().c_str());
    return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"phase-space positivity toolkit"};
    app.require_subcommand(1);

    Options opt;
    std::string config_path, m_range, d_range;

    app.add_option("--config", config_path, "JSON config file with defaults");

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--m", opt.m, "mass");
        sub->add_option("--d", opt.d, "decoherence strength");
        sub->add_option("--state", opt.state, "cat | vacuum | fock1");
        sub->add_option("--sep", opt.sep, "cat separation in units of sigma0");
        sub->add_option("--family", opt.family, "robust | vacuum | custom");
        sub->add_option("--alpha-r", opt.alpha_r, "custom family Re(alpha)");
        sub->add_option("--alpha-i", opt.alpha_i, "custom family Im(alpha)");
        sub->add_option("--grid", opt.grid, "grid points per axis");
        sub->add_option("--x-half", opt.x_half, "half-domain in x, units of sigma0");
        sub->add_option("--p-half", opt.p_half, "half-domain in p, units of 1/sigma0");
        sub->add_option("--t", opt.t, "time in units of t0");
        sub->add_option("--tmax", opt.tmax, "probe schedule end, units of t0");
        sub->add_option("--probes", opt.probes, "number of probe times");
        sub->add_option("--cutoff", opt.cutoff, "deconvolution amplification cap");
        sub->add_option("--seed", opt.seed, "recorded in the config hash");
        sub->add_option("--threads", opt.threads, "worker cap (PHASEPOS_THREADS wins)");
        sub->add_option("--out", opt.out, "output directory");
    };

    CLI::App* times = app.add_subcommand("decoherence-times",
                                         "positivity thresholds for W and P");
    CLI::App* evolve = app.add_subcommand("evolve", "evolve a state and export fields");
    CLI::App* cw = app.add_subcommand("certify-w", "certify Wigner positivity");
    CLI::App* cp = app.add_subcommand("certify-p", "certify P-function positivity");
    CLI::App* oracle = app.add_subcommand("oracle-compare",
                                          "analytic vs finite-difference propagator");
    CLI::App* sweep = app.add_subcommand("sweep", "thresholds over a parameter grid");
    for (CLI::App* sub : {times, evolve, cw, cp, oracle, sweep}) add_common(sub);
    sweep->add_option("--m-range", m_range, "lo:hi:n sweep in m");
    sweep->add_option("--d-range", d_range, "lo:hi:n sweep in D");

    // Parse twice: the first pass only fetches --config so file values sit
    // between built-in defaults and explicit flags.
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_validation;
    }
    if (!config_path.empty()) {
        try {
            Options from_file;
            apply_config_file(from_file, config_path);
            opt = from_file;
            app.clear();
            app.parse(argc, argv);
        } catch (const validation_failure& e) {
            std::cerr << "error: " << e.what() << "\n";
            return exit_validation;
        } catch (const CLI::ParseError& e) {
            const int rc = app.exit(e);
            return rc == 0 ? exit_ok : exit_validation;
        }
    }

    try {
        if (times->parsed()) return run_decoherence_times(opt);
        if (evolve->parsed()) return run_evolve(opt);
        if (cw->parsed()) return run_certify(opt, false);
        if (cp->parsed()) return run_certify(opt, true);
        if (oracle->parsed()) return run_oracle_compare(opt);
        if (sweep->parsed()) return run_sweep(opt, m_range, d_range);
        std::cerr << "error: no subcommand\n";
        return exit_validation;
    } catch (const validation_failure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_validation;
    } catch (const contract_failure& e) {
        std::cerr << "contract violation: " << e.what() << "\n";
        return exit_contract;
    } catch (const coverage_error& e) {
        std::cerr << "coverage error: " << e.what() << "\n";
        return exit_contract;
    } catch (const stability_error& e) {
        std::cerr << "stability error: " << e.what() << "\n";
        return exit_contract;
    } catch (const threshold_error& e) {
        std::cerr << "threshold error: " << e.what() << "\n";
        return exit_contract;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_validation;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_validation;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 1;
    }
}
