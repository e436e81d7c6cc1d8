#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "facets/geometry.hpp"
#include "facets/metrics.hpp"
#include "facets/phase.hpp"
#include "facets/sampler.hpp"
#include "facets/stack.hpp"

namespace facets {

inline constexpr std::string_view kVersion = "facets 0.1.0";

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view text);
std::string hex64(std::uint64_t value);

void write_polygon_csv(std::ostream& out, const Polygon& polygon);

nlohmann::json stack_to_json(const Stack& stack);

/// Columns v,ell,kind,a,radius,tau,energy.
void write_phase_header(std::ostream& out);
void write_phase_row(std::ostream& out, const VPSolution& solution);

/// Columns ell,v_star,v_tilde,a_minus,a_plus,A_ell,k_star; v_tilde is blank above k*.
void write_thresholds_csv(std::ostream& out, const PhaseDiagram& diagram, const std::vector<double>& A);

/// Columns sweep,alpha,energy,n_large.
void write_records_csv(std::ostream& out, const std::vector<SampleRecord>& records);

nlohmann::json epigraph_to_json(const EpigraphReport& report);

}  // namespace facets
