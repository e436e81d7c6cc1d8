#pragma once

#include <limits>
#include <span>
#include <string_view>
#include <vector>

#include "facets/geometry.hpp"
#include "facets/wulff.hpp"

namespace facets {

/// Energy of configurations outside a branch's admissible area range.
inline constexpr double kInfiniteEnergy = std::numeric_limits<double>::infinity();

enum class StackKind { empty, type1, type2 };

std::string_view to_string(StackKind kind);

/// Nested stack of monolayer loops.
///
/// type2: `layers` identical Wulff plaquettes.
/// type1: `layers - 1` identical plaquettes topped by a Wulff shape, all of one radius.
/// A stack whose area is outside the admissible range carries tau = kInfiniteEnergy.
struct Stack {
    int layers = 0;
    StackKind kind = StackKind::empty;
    double area = 0.0;
    double radius = 0.0;
    double tau = 0.0;
    std::vector<double> per_layer_areas;  // non-increasing, bottom layer first

    bool finite() const { return tau < kInfiniteEnergy; }
};

Stack empty_stack();

/// Layer count 4/(4-w) at which type-1 stacks degenerate.
inline double degenerate_layer_count(double w) { return 4.0 / (4.0 - w); }

/// Throws std::invalid_argument for the degenerate layer count.
Stack type1_stack(int layers, double area, double w);
Stack type2_stack(int layers, double area, double w);

/// Surface tension plus the bulk quadratic a^2 / (2 sigma).
double stack_energy(const Stack& stack, double sigma);

/// Type-2 objective -v a + a^2/(2 sigma) + tau(type-2 stack), with a continuous
/// layer count. Infinite outside {0 <= l w <= a <= 4 l}.
double fv(double layers, double area, double w, double sigma, double v);

/// Minimal surface tension over compatible loop families of total area a.
double tau_of_area(double area, double w);

/// Omega = tau(loop) - tau(area(loop)).
double excess_surface_tension(const WulffGeometry& geometry, const Polygon& loop);
double excess_surface_tension(double w, const Stack& stack);

/// 1 + number of loops strictly containing each loop (identical loops stack in input order).
/// Throws std::invalid_argument when two loops cross.
std::vector<int> nesting_depths(std::span<const Polygon> loops);

/// b_l = area covered by at least l loops. Throws std::invalid_argument when two
/// loops cross (neither nested nor disjoint).
std::vector<double> areas_by_level(std::span<const Polygon> loops);

/// Total tension of the stack of optimal shapes with the given level areas.
double reduced_tension(double w, std::span<const double> level_areas);

struct EdgeColoring {
    int n = 0;
    std::vector<int> colors;  // n*n symmetric, -1 on the diagonal

    int color(int i, int j) const { return colors[static_cast<std::size_t>(i) * n + j]; }
    int color_count() const;
    bool is_proper() const;
};

/// Proper edge coloring of the complete graph: n colors for odd n, n-1 for even n.
EdgeColoring edge_color_complete(int n);

}  // namespace facets
