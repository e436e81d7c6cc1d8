#include "facets/stack.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace facets {

namespace {

constexpr double kRangeTol = 1e-12;

Stack out_of_range(int layers, StackKind kind, double area) {
    Stack s;
    s.layers = layers;
    s.kind = kind;
    s.area = area;
    s.tau = kInfiniteEnergy;
    return s;
}

double plaquette_area(double w, double r) { return 4.0 - (4.0 - w) * r * r; }
double plaquette_tau(double w, double r) { return 8.0 - 2.0 * r * (4.0 - w); }

}  // namespace

std::string_view to_string(StackKind kind) {
    switch (kind) {
        case StackKind::empty: return "empty";
        case StackKind::type1: return "type1";
        case StackKind::type2: return "type2";
    }
    return "unknown";
}

Stack empty_stack() { return Stack{}; }

Stack type1_stack(int layers, double area, double w) {
    if (layers < 1) throw std::invalid_argument("type-1 stack needs at least one layer");
    const double denom = 4.0 * (layers - 1) - layers * w;
    if (std::abs(denom) < 1e-12) {
        throw std::invalid_argument("type-1 stack is degenerate at l = 4/(4-w), l = " + std::to_string(layers));
    }
    const double lo = std::min(4.0 * (layers - 1), layers * w);
    const double hi = std::max(4.0 * (layers - 1), layers * w);
    if (area < lo - kRangeTol || area > hi + kRangeTol) return out_of_range(layers, StackKind::type1, area);

    // a = 4(l-1) - r^2 (l(4-w) - 4)
    const double r = std::sqrt(std::clamp((4.0 * (layers - 1) - area) / denom, 0.0, 1.0));
    Stack s;
    s.layers = layers;
    s.kind = StackKind::type1;
    s.area = area;
    s.radius = r;
    s.tau = (layers - 1) * plaquette_tau(w, r) + 2.0 * r * w;
    s.per_layer_areas.assign(static_cast<std::size_t>(layers - 1), plaquette_area(w, r));
    s.per_layer_areas.push_back(w * r * r);
    return s;
}

Stack type2_stack(int layers, double area, double w) {
    if (layers == 0) return area == 0.0 ? empty_stack() : out_of_range(0, StackKind::type2, area);
    if (layers < 0) throw std::invalid_argument("negative layer count");
    const double lo = layers * w;
    const double hi = 4.0 * layers;
    if (area < lo - kRangeTol || area > hi + kRangeTol) return out_of_range(layers, StackKind::type2, area);
    const double slack = std::max(0.0, hi - area);
    Stack s;
    s.layers = layers;
    s.kind = StackKind::type2;
    s.area = area;
    s.radius = std::min(1.0, std::sqrt(slack / ((4.0 - w) * layers)));
    s.tau = 8.0 * layers - 2.0 * std::sqrt(slack * (4.0 - w) * layers);
    s.per_layer_areas.assign(static_cast<std::size_t>(layers), area / layers);
    return s;
}

double stack_energy(const Stack& stack, double sigma) {
    if (stack.kind == StackKind::empty) return 0.0;
    return stack.tau + stack.area * stack.area / (2.0 * sigma);
}

double fv(double layers, double area, double w, double sigma, double v) {
    if (layers == 0.0 && area == 0.0) return 0.0;
    if (!(layers >= 0.0 && layers * w <= area + kRangeTol && area <= 4.0 * layers + kRangeTol)) return kInfiniteEnergy;
    const double slack = std::max(0.0, 4.0 * layers - area);
    return -v * area + area * area / (2.0 * sigma) + 8.0 * layers - 2.0 * std::sqrt(slack * (4.0 - w) * layers);
}

double tau_of_area(double area, double w) {
    if (area <= 0.0) return 0.0;
    double best = kInfiniteEnergy;
    const int top = static_cast<int>(std::floor(area / w)) + 2;
    for (int l = std::max(1, static_cast<int>(std::floor(area / 4.0))); l <= top; ++l) {
        best = std::min(best, type2_stack(l, area, w).tau);
        if (std::abs(4.0 * (l - 1) - l * w) >= 1e-12) best = std::min(best, type1_stack(l, area, w).tau);
    }
    return best;
}

double excess_surface_tension(const WulffGeometry& geometry, const Polygon& loop) {
    return curve_surface_tension(geometry.norm, loop) - tau_of_area(loop.area(), geometry.w);
}

double excess_surface_tension(double w, const Stack& stack) { return stack.tau - tau_of_area(stack.area, w); }

namespace {

enum class Relation { inside, outside, boundary };

Relation classify_point(const Polygon& poly, Vec2 p, double tol) {
    if (boundary_distance(poly, p) <= tol) return Relation::boundary;
    return poly.contains(p) ? Relation::inside : Relation::outside;
}

// Probe points of a loop: its vertices and edge midpoints.
std::vector<Vec2> probes(const Polygon& poly) {
    std::vector<Vec2> out;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(poly[i]);
        out.push_back((poly[i] + poly[(i + 1) % n]) * 0.5);
    }
    return out;
}

bool any_proper_crossing(const Polygon& a, const Polygon& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        const Vec2 p = a[i], q = a[(i + 1) % a.size()];
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (segments_cross_properly(p, q, b[j], b[(j + 1) % b.size()])) return true;
        }
    }
    return false;
}

}  // namespace

std::vector<int> nesting_depths(std::span<const Polygon> loops) {
    const std::size_t n = loops.size();
    std::vector<int> depth(n, 1);
    constexpr double tol = 1e-9;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const Polygon& a = loops[i];
            const Polygon& b = loops[j];
            if (any_proper_crossing(a, b)) throw std::invalid_argument("loops " + std::to_string(i) + " and " + std::to_string(j) + " cross");
            bool a_out = false, a_in = false, b_out = false, b_in = false;
            for (const Vec2 p : probes(a)) {
                const Relation r = classify_point(b, p, tol);
                a_out |= r == Relation::outside;
                a_in |= r == Relation::inside;
            }
            for (const Vec2 p : probes(b)) {
                const Relation r = classify_point(a, p, tol);
                b_out |= r == Relation::outside;
                b_in |= r == Relation::inside;
            }
            const bool a_sub_b = !a_out && a.area() <= b.area() + tol;
            const bool b_sub_a = !b_out && b.area() <= a.area() + tol;
            if (a_sub_b && b_sub_a) {
                ++depth[j];  // identical loops: the later one sits on top
            } else if (a_sub_b) {
                ++depth[i];
            } else if (b_sub_a) {
                ++depth[j];
            } else if (a_in || b_in) {
                throw std::invalid_argument("loops " + std::to_string(i) + " and " + std::to_string(j) + " overlap without nesting");
            }
        }
    }
    return depth;
}

std::vector<double> areas_by_level(std::span<const Polygon> loops) {
    const std::vector<int> depth = nesting_depths(loops);
    std::vector<double> levels;
    for (std::size_t i = 0; i < loops.size(); ++i) {
        const auto d = static_cast<std::size_t>(depth[i]);
        if (levels.size() < d) levels.resize(d, 0.0);
        levels[d - 1] += loops[i].area();
    }
    return levels;
}

double reduced_tension(double w, std::span<const double> level_areas) {
    double total = 0.0;
    for (const double b : level_areas) {
        if (b > 4.0 + 1e-12) return kInfiniteEnergy;
        total += optimal_shape_value(w, std::min(b, 4.0)).tau;
    }
    return total;
}

int EdgeColoring::color_count() const {
    int top = -1;
    for (const int c : colors) top = std::max(top, c);
    return top + 1;
}

bool EdgeColoring::is_proper() const {
    for (int v = 0; v < n; ++v) {
        std::vector<bool> seen(static_cast<std::size_t>(color_count()), false);
        for (int u = 0; u < n; ++u) {
            if (u == v) continue;
            const int c = color(v, u);
            if (c < 0 || seen[static_cast<std::size_t>(c)]) return false;
            seen[static_cast<std::size_t>(c)] = true;
        }
    }
    return true;
}

EdgeColoring edge_color_complete(int n) {
    if (n < 2) throw std::invalid_argument("edge coloring needs at least two vertices");
    EdgeColoring out;
    out.n = n;
    out.colors.assign(static_cast<std::size_t>(n) * n, -1);
    // Vertices of a regular m-gon (m odd); chords i-j and i'-j' are parallel iff
    // i + j = i' + j' (mod m), and each parallel class contains exactly one side.
    const int m = n % 2 == 1 ? n : n - 1;
    auto set = [&](int i, int j, int c) {
        out.colors[static_cast<std::size_t>(i) * n + j] = c;
        out.colors[static_cast<std::size_t>(j) * n + i] = c;
    };
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) set(i, j, (i + j) % m);
    }
    if (m != n) {
        // The color missing at vertex v is the class of the side opposite v: 2v mod m.
        for (int v = 0; v < m; ++v) set(v, m, (2 * v) % m);
    }
    return out;
}

}  // namespace facets
