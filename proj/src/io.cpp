#include "facets/io.hpp"

#include <cstdio>
#include <ostream>

namespace facets {

std::uint64_t fnv1a(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string hex64(std::uint64_t value) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
    return buf;
}

namespace {

// Round-trippable doubles.
std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

void write_polygon_csv(std::ostream& out, const Polygon& polygon) {
    out << "x,y\n";
    for (const Vec2 v : polygon.vertices()) out << num(v.x) << ',' << num(v.y) << '\n';
}

nlohmann::json stack_to_json(const Stack& stack) {
    return {{"layers", stack.layers},
            {"kind", std::string(to_string(stack.kind))},
            {"area", stack.area},
            {"radius", stack.radius},
            {"tau", stack.finite() ? nlohmann::json(stack.tau) : nlohmann::json("inf")},
            {"per_layer_areas", stack.per_layer_areas}};
}

void write_phase_header(std::ostream& out) { out << "v,ell,kind,a,radius,tau,energy\n"; }

void write_phase_row(std::ostream& out, const VPSolution& s) {
    out << num(s.v) << ',' << s.stack.layers << ',' << to_string(s.stack.kind) << ',' << num(s.stack.area) << ','
        << num(s.stack.radius) << ',' << num(s.stack.tau) << ',' << num(s.total_energy) << '\n';
}

void write_thresholds_csv(std::ostream& out, const PhaseDiagram& d, const std::vector<double>& A) {
    out << "ell,v_star,v_tilde,a_minus,a_plus,A_ell,k_star\n";
    for (std::size_t i = 0; i < d.critical_slopes.size(); ++i) {
        const int l = static_cast<int>(i) + 1;
        out << l << ',' << num(d.critical_slopes[i]) << ',';
        if (l <= d.k_star) out << num(d.tilde_slopes[i]);
        out << ',' << num(d.entry_area[i]) << ',' << num(d.exit_area[i]) << ',' << num(A[i]) << ',' << d.k_star << '\n';
    }
}

void write_records_csv(std::ostream& out, const std::vector<SampleRecord>& records) {
    out << "sweep,alpha,energy,n_large\n";
    for (const auto& r : records) out << r.sweep << ',' << r.alpha << ',' << num(r.energy) << ',' << r.n_large << '\n';
}

nlohmann::json epigraph_to_json(const EpigraphReport& report) {
    nlohmann::json per_layer = nlohmann::json::array();
    for (const auto& d : report.per_layer) per_layer.push_back(d ? nlohmann::json(*d) : nlohmann::json(nullptr));
    return {{"per_layer_distances", per_layer},
            {"top_shift", {report.top_shift.x, report.top_shift.y}},
            {"epigraph_distance", report.distance},
            {"layer_counts", {{"observed", report.observed_layers}, {"predicted", report.predicted_layers}}}};
}

}  // namespace facets
