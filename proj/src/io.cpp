#include "phasepos/io.hpp"

#include <json.hpp>

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace phasepos::io {

using nlohmann::json;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

json params_to_json(const SystemParams& p) {
    return json{{"m", p.m}, {"D", p.D}, {"sigma0", p.sigma0}, {"t0", p.t0}};
}

} // namespace

void write_grid_field(const GridField& f, const SystemParams& params,
                      const std::string& stem,
                      const std::optional<std::string>& config_hash) {
    {
        std::ofstream csv = open_out(stem + ".csv");
        csv << "x,p,value\n";
        for (int i = 0; i < f.grid.nx; ++i)
            for (int j = 0; j < f.grid.np; ++j)
                csv << format_double(f.grid.x(i)) << ',' << format_double(f.grid.p(j))
                    << ',' << format_double(f.at(i, j)) << '\n';
    }
    json side{{"nx", f.grid.nx},
              {"np", f.grid.np},
              {"x_min", f.grid.x_min},
              {"x_max", f.grid.x_max},
              {"p_min", f.grid.p_min},
              {"p_max", f.grid.p_max},
              {"kind", to_string(f.kind)},
              {"params", params_to_json(params)},
              {"reliable", f.reliability.reliable}};
    if (!f.reliability.reason.empty()) side["reliability_reason"] = f.reliability.reason;
    if (config_hash) side["config_hash"] = *config_hash;
    std::ofstream js = open_out(stem + ".json");
    js << side.dump(2) << '\n';
}

GridField read_grid_field(const std::string& stem, SystemParams* params_out) {
    std::ifstream js(stem + ".json");
    if (!js)
        throw std::runtime_error("cannot open sidecar: " + stem + ".json");
    json side = json::parse(js);
    const PhaseGrid grid(side.at("nx").get<int>(), side.at("np").get<int>(),
                         side.at("x_min").get<double>(), side.at("x_max").get<double>(),
                         side.at("p_min").get<double>(), side.at("p_max").get<double>());
    GridField f(grid, field_kind_from_string(side.at("kind").get<std::string>()));
    f.reliability.reliable = side.value("reliable", true);
    f.reliability.reason = side.value("reliability_reason", std::string{});
    if (params_out != nullptr) {
        const auto& p = side.at("params");
        *params_out = make_params(p.at("m").get<double>(), p.at("D").get<double>());
    }

    std::ifstream csv(stem + ".csv");
    if (!csv)
        throw std::runtime_error("cannot open CSV: " + stem + ".csv");
    std::string line;
    std::getline(csv, line);  // header
    std::size_t k = 0;
    while (std::getline(csv, line)) {
        if (line.empty()) continue;
        if (k >= f.values.size())
            throw std::runtime_error("grid CSV has more rows than nx*np");
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos)
            throw std::runtime_error("malformed grid CSV row: " + line);
        f.values[k++] = std::strtod(line.c_str() + c2 + 1, nullptr);
    }
    if (k != f.values.size())
        throw std::runtime_error("grid CSV has fewer rows than nx*np");
    return f;
}

void write_density_csv(const DensityMatrix& rho, const std::string& path) {
    std::ofstream csv = open_out(path);
    csv << "q,qp,re,im\n";
    for (int i = 0; i < rho.grid.n; ++i)
        for (int j = 0; j < rho.grid.n; ++j) {
            const auto v = rho.at(i, j);
            csv << format_double(rho.grid.q(i)) << ',' << format_double(rho.grid.q(j))
                << ',' << format_double(v.real()) << ',' << format_double(v.imag())
                << '\n';
        }
}

void write_trace_csv(const std::vector<EvolutionTracePoint>& trace,
                     const std::string& path) {
    std::ofstream csv = open_out(path);
    csv << "t,min_value,norm,p2\n";
    for (const auto& pt : trace)
        csv << format_double(pt.t) << ',' << format_double(pt.min_value) << ','
            << format_double(pt.norm) << ',' << format_double(pt.p2) << '\n';
}

std::string report_to_json(const CertificationReport& rep) {
    json probes = json::array();
    for (const auto& pr : rep.probes) {
        json p{{"t", pr.t}, {"available", pr.available}};
        if (pr.available) {
            p["min_value"] = pr.min_value;
            p["negative_volume"] = pr.negative_volume;
            p["certified"] = pr.certified;
        }
        probes.push_back(p);
    }
    json j{{"state", rep.state_name},
           {"family", rep.family_name},
           {"thresholds",
            json{{"theory", rep.threshold},
                 {"empirical_crossing", rep.empirical_crossing}}},
           {"all_certified_past_threshold", rep.all_certified_past_threshold},
           {"probes", probes}};
    return j.dump(2);
}

void write_report_json(const CertificationReport& rep, const std::string& path,
                       const std::optional<std::string>& config_hash) {
    json j = json::parse(report_to_json(rep));
    if (config_hash) j["config_hash"] = *config_hash;
    std::ofstream out = open_out(path);
    out << j.dump(2) << '\n';
}

} // namespace phasepos::io
