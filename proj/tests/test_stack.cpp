#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "doctest.h"

#include "facets/stack.hpp"

using namespace facets;
using std::numbers::pi;

namespace {

Polygon rect(double x0, double y0, double x1, double y1) { return Polygon({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}); }

}  // namespace

TEST_CASE("type-1 stacks") {
    SUBCASE("single wulff shape") {
        for (const double a : {0.5, 1.7, pi}) {
            const Stack s = type1_stack(1, a, pi);
            CHECK(s.radius == doctest::Approx(std::sqrt(a / pi)));
            CHECK(s.tau == doctest::Approx(2.0 * std::sqrt(a * pi)));
        }
    }
    SUBCASE("left end is one full plaquette") {
        const Stack s = type1_stack(2, 4.0, pi);
        CHECK(s.radius == doctest::Approx(0.0));
        CHECK(s.tau == doctest::Approx(8.0));
        CHECK(s.tau == doctest::Approx(type2_stack(1, 4.0, pi).tau));
    }
    SUBCASE("right end is two wulff shapes") {
        const Stack s = type1_stack(2, 2 * pi, pi);
        CHECK(s.radius == doctest::Approx(1.0));
        CHECK(s.tau == doctest::Approx(4 * pi));
        CHECK(s.tau == doctest::Approx(type2_stack(2, 2 * pi, pi).tau));
    }
    SUBCASE("area constraint and per-layer sum") {
        const Stack s = type1_stack(3, 9.0, pi);
        REQUIRE(s.finite());
        double area = 0.0, tau = 0.0;
        for (const double b : s.per_layer_areas) {
            area += b;
            tau += optimal_shape_value(pi, b).tau;
        }
        CHECK(area == doctest::Approx(9.0));
        CHECK(tau == doctest::Approx(s.tau));
        CHECK(s.per_layer_areas.back() == doctest::Approx(pi * s.radius * s.radius));
    }
    SUBCASE("out of range") {
        CHECK_FALSE(type1_stack(1, pi + 0.1, pi).finite());
        CHECK_FALSE(type1_stack(2, 3.9, pi).finite());
        CHECK_THROWS_AS(type1_stack(8, 20.0, 3.5), std::invalid_argument);
    }
}

TEST_CASE("type-2 stacks") {
    for (const int l : {1, 2, 5}) {
        const Stack s = type2_stack(l, l * pi, pi);
        CHECK(s.radius == doctest::Approx(1.0));
        CHECK(s.tau == doctest::Approx(2 * l * pi));
    }
    const Stack box = type2_stack(1, 4.0, pi);
    CHECK(box.radius == doctest::Approx(0.0));
    CHECK(box.tau == doctest::Approx(8.0));

    const Stack s = type2_stack(2, 7.0, pi);
    CHECK(s.radius == doctest::Approx(0.763199872766).epsilon(1e-10));
    CHECK(s.tau == doctest::Approx(13.379454489752).epsilon(1e-10));
    CHECK(2 * optimal_shape_value(pi, 3.5).tau == doctest::Approx(s.tau).epsilon(1e-12));
    CHECK(s.per_layer_areas == std::vector<double>{3.5, 3.5});

    CHECK_FALSE(type2_stack(2, 6.0, pi).finite());
    CHECK_FALSE(type2_stack(2, 8.5, pi).finite());
}

TEST_CASE("stack energy and the type-2 objective") {
    CHECK(stack_energy(empty_stack(), 1.0) == 0.0);
    const Stack s = type2_stack(1, pi, pi);
    CHECK(stack_energy(s, 1.0) == doctest::Approx(11.217987507724).epsilon(1e-12));
    CHECK(stack_energy(s, 1e300) == doctest::Approx(s.tau));
    for (const double v : {0.0, 2.0, 17.0}) CHECK(fv(0, 0, pi, 1.0, v) == 0.0);
    CHECK(fv(1, pi, pi, 1.0, 0.0) == doctest::Approx(11.217987507724).epsilon(1e-12));
    CHECK(fv(1, 3.0, pi, 1.0, 0.0) == kInfiniteEnergy);
    CHECK(fv(2, 8.5, pi, 1.0, 0.0) == kInfiniteEnergy);
}

TEST_CASE("endpoint identities") {
    for (const double w : {2.5, pi, 3.5}) {
        for (int l = 2; l <= 6; ++l) {
            CHECK(std::abs(type1_stack(l, 4.0 * (l - 1), w).tau - type2_stack(l - 1, 4.0 * (l - 1), w).tau) < 1e-10);
            CHECK(std::abs(type1_stack(l, l * w, w).tau - type2_stack(l, l * w, w).tau) < 1e-10);
        }
    }
}

TEST_CASE("derivative law on both stack types") {
    const double h = 1e-5;
    for (const double w : {2.5, pi, 3.5}) {
        for (int l = 1; l <= 4; ++l) {
            for (int k = 1; k <= 100; ++k) {
                const double a = l * w + (4.0 * l - l * w) * k / 101.0;
                const Stack s = type2_stack(l, a, w);
                const double d = (type2_stack(l, a + h, w).tau - type2_stack(l, a - h, w).tau) / (2 * h);
                CHECK(d == doctest::Approx(1.0 / s.radius).epsilon(1e-6));
            }
            if (std::abs(l - degenerate_layer_count(w)) < 1e-6) continue;
            const double lo = std::min(4.0 * (l - 1), l * w), hi = std::max(4.0 * (l - 1), l * w);
            for (int k = 1; k <= 100; ++k) {
                const double a = lo + (hi - lo) * k / 101.0;
                const Stack s = type1_stack(l, a, w);
                if (!s.finite()) continue;
                const double d = (type1_stack(l, a + h, w).tau - type1_stack(l, a - h, w).tau) / (2 * h);
                CHECK(d == doctest::Approx(1.0 / s.radius).epsilon(1e-6));
            }
        }
    }
}

TEST_CASE("type-1 stacks never win above the degenerate layer count") {
    for (const double w : {2.5, pi, 3.5}) {
        const int first = static_cast<int>(std::floor(degenerate_layer_count(w))) + 1;
        for (int l = first; l <= first + 4; ++l) {
            for (int k = 0; k <= 200; ++k) {
                const double a = l * w + (4.0 * (l - 1) - l * w) * k / 200.0;
                const Stack t1 = type1_stack(l, a, w), t2 = type2_stack(l, a, w);
                if (t1.finite() && t2.finite()) CHECK(t1.tau >= t2.tau - 1e-12);
            }
        }
    }
}

TEST_CASE("excess surface tension") {
    const auto g = build_wulff(Norm::euclidean(), 4096);
    for (const double b : {0.3, 1.0, 3.0, 3.6}) {
        CHECK(std::abs(excess_surface_tension(g, optimal_shape(g, b).polygon)) < 1e-3);
    }
    const Polygon half = rect(-0.5, -0.5, 0.5, 0.5);
    CHECK(excess_surface_tension(g, half) == doctest::Approx(0.455092298189).epsilon(1e-3));
    const Polygon p({{-0.4, -0.3}, {0.5, -0.2}, {0.1, 0.6}});
    CHECK(excess_surface_tension(g, p.translated({0.2, -0.1})) == doctest::Approx(excess_surface_tension(g, p)).epsilon(1e-12));
    CHECK(excess_surface_tension(pi, type2_stack(2, 7.0, pi)) == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("areas by level") {
    const Polygon a2 = rect(-1, -1, 0, 1);
    CHECK(areas_by_level(std::vector<Polygon>{a2}) == std::vector<double>{2.0});

    const std::vector<Polygon> disjoint{rect(0.2, -0.5, 1.0, 0.75), rect(-1, -1, 0, 1)};
    const auto d = areas_by_level(disjoint);
    REQUIRE(d.size() == 1);
    CHECK(d[0] == doctest::Approx(3.0));

    const std::vector<Polygon> nested{rect(-0.5, -0.5, 0.5, 0.5), rect(-1, -1, 0.5, 1)};
    const auto n = areas_by_level(nested);
    REQUIRE(n.size() == 2);
    CHECK(n[0] == doctest::Approx(3.0));
    CHECK(n[1] == doctest::Approx(1.0));
    CHECK(nesting_depths(nested) == std::vector<int>{2, 1});

    const std::vector<Polygon> crossing{rect(-0.5, -0.5, 0.5, 0.5), rect(0, 0, 0.9, 0.9)};
    CHECK_THROWS_AS(areas_by_level(crossing), std::invalid_argument);
}

TEST_CASE("reducing to level areas never raises the tension") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double w = pi;
    const Norm n = Norm::euclidean();
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Polygon> loops;
        double x0 = -1 + 0.3 * u(rng), y0 = -1 + 0.3 * u(rng), x1 = 1 - 0.3 * u(rng), y1 = 1 - 0.3 * u(rng);
        const int depth = 1 + static_cast<int>(u(rng) * 4);
        for (int k = 0; k < depth && x1 - x0 > 0.05 && y1 - y0 > 0.05; ++k) {
            loops.push_back(rect(x0, y0, x1, y1));
            const double sx = x1 - x0, sy = y1 - y0;
            x0 += 0.4 * sx * u(rng);
            x1 -= 0.4 * sx * u(rng);
            y0 += 0.4 * sy * u(rng);
            y1 -= 0.4 * sy * u(rng);
        }
        double tau = 0.0;
        for (const auto& p : loops) tau += curve_surface_tension(n, p);
        CHECK(reduced_tension(w, areas_by_level(loops)) <= tau + 1e-9);
    }
}

TEST_CASE("edge colouring of complete graphs") {
    CHECK(edge_color_complete(2).color_count() == 1);
    CHECK(edge_color_complete(3).color_count() == 3);
    CHECK(edge_color_complete(4).color_count() == 3);
    for (int n = 2; n <= 50; ++n) {
        const EdgeColoring c = edge_color_complete(n);
        CHECK(c.is_proper());
        CHECK(c.color_count() == (n % 2 ? n : n - 1));
        bool proper = true;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                if (i == j) continue;
                if (c.color(i, j) != c.color(j, i) || c.color(i, j) < 0) proper = false;
                for (int k = j + 1; k < n; ++k) {
                    if (k != i && c.color(i, j) == c.color(i, k)) proper = false;
                }
            }
        }
        CHECK(proper);
    }
}
