#pragma once

#include "phasepos/core.hpp"
#include "phasepos/evolution.hpp"
#include "phasepos/positivity.hpp"
#include "phasepos/states.hpp"

#include <optional>
#include <string>
#include <vector>

// File formats:
//   - GridField: "<stem>.csv" with header "x,p,value" (row-major over x, p)
//     plus a JSON sidecar "<stem>.json" with grid metadata, kind, physical
//     parameters, the reliability flag and, when produced by the CLI, the
//     hash of the effective run configuration.
//   - DensityMatrix: CSV "q,qp,re,im".
//   - Evolution traces: CSV "t,min_value,norm,p2".
//   - Certification reports: JSON.
// Doubles are printed with %.17g, so identical computations give identical
// bytes.

namespace phasepos::io {

std::string format_double(double v);

/// 64-bit FNV-1a of a byte string, rendered as 16 hex digits.
std::string fnv1a_hex(const std::string& bytes);

void write_grid_field(const GridField& f, const SystemParams& params,
                      const std::string& stem,
                      const std::optional<std::string>& config_hash = std::nullopt);

/// Reads "<stem>.csv" + "<stem>.json" back; the inverse of write_grid_field.
GridField read_grid_field(const std::string& stem, SystemParams* params_out = nullptr);

void write_density_csv(const DensityMatrix& rho, const std::string& path);

void write_trace_csv(const std::vector<EvolutionTracePoint>& trace,
                     const std::string& path);

std::string report_to_json(const CertificationReport& rep);
void write_report_json(const CertificationReport& rep, const std::string& path,
                       const std::optional<std::string>& config_hash = std::nullopt);

} // namespace phasepos::io
