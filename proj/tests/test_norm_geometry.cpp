#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"

#include "facets/wulff.hpp"

using namespace facets;
using std::numbers::pi;

namespace {

Polygon box(double s) { return Polygon({{-s, -s}, {s, -s}, {s, s}, {-s, s}}); }

// Killed-walk values at the axis and the diagonal, by hand from the rate region.
double kw_axis(double beta) { return std::acosh(std::exp(beta) / 2.0 - 1.0); }
double kw_diag(double beta) { return std::sqrt(2.0) * std::acosh(std::exp(beta) / 4.0); }

}  // namespace

TEST_CASE("euclidean norm is flat") {
    const Norm n = make_norm("euclidean", {});
    for (int k = 0; k < 50; ++k) CHECK(n(k * 0.37) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(n(Vec2{3.0, 4.0}) == doctest::Approx(5.0));
}

TEST_CASE("killed walk closed forms") {
    for (const double beta : {3.0, 10.0}) {
        const Norm n = Norm::killed_walk(beta);
        CHECK(n.axis_scale() == doctest::Approx(kw_axis(beta)).epsilon(1e-12));
        CHECK(n(0.0) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(n(pi / 4) == doctest::Approx(kw_diag(beta) / kw_axis(beta)).epsilon(1e-10));
    }
}

TEST_CASE("killed walk approaches l1 at rate sqrt2 log2 / beta") {
    double prev = 1e9;
    for (const double beta : {5.0, 10.0, 20.0, 40.0}) {
        const Norm n = Norm::killed_walk(beta);
        double dev = 0.0;
        for (int i = 0; i <= 400; ++i) {
            const double t = i * pi / 800;
            dev = std::max(dev, std::abs(n(t) - (std::cos(t) + std::sin(t))));
        }
        CHECK(dev < prev);
        CHECK(dev * beta == doctest::Approx(std::sqrt(2.0) * std::log(2.0)).epsilon(0.02));
        prev = dev;
    }
}

TEST_CASE("sampled norm is normalized and symmetric") {
    const Norm n = Norm::sampled({{0.0, 2.0}, {pi / 8, 2.1}, {pi / 4, 2.15}});
    CHECK(n(0.0) == doctest::Approx(1.0));
    CHECK(n(pi / 4) == doctest::Approx(1.075));
    CHECK(n(pi / 8) == doctest::Approx(1.05));
    CHECK(triangle_violation(n) < 1e-12);
    CHECK_THROWS(Norm::sampled({{0.0, 1.0}, {pi / 8, 1.5}, {pi / 4, 1.0}}));
    CHECK(n.axis_scale() == doctest::Approx(2.0));
    for (int k = 0; k < 40; ++k) {
        const double t = 0.1 + k * 0.13;
        CHECK(n(t) == n(t + pi / 2));
        CHECK(n(t) == doctest::Approx(n(-t)).epsilon(1e-12));
    }
}

TEST_CASE("norm table reader") {
    std::istringstream in("theta,value\n# comment\n\n0,1.5\n0.785398,1.8\n");
    const auto t = read_norm_table(in);
    REQUIRE(t.size() == 2);
    CHECK(t[1].value == 1.8);
    CHECK_THROWS(make_norm("octagonal", {}));
}

TEST_CASE("quarter-turn symmetry is exact") {
    const Norm n = Norm::killed_walk(3.0);
    for (int k = 0; k < 100; ++k) {
        const double t = -3.0 + k * 0.061;
        CHECK(n(t) == n(t + pi / 2));
    }
}

TEST_CASE("wulff areas") {
    CHECK(std::abs(build_wulff(Norm::euclidean(), 4096).w - pi) < 1e-4);
    // area of {cosh u1 + cosh u2 <= e^beta / 2} over the squared axis value, by quadrature
    CHECK(build_wulff(Norm::killed_walk(3.0), 4096).w == doctest::Approx(3.5055618832).epsilon(1e-5));
    CHECK(build_wulff(Norm::killed_walk(10.0), 4096).w == doctest::Approx(3.9342740850).epsilon(1e-4));
    CHECK(triangle_violation(Norm::killed_walk(3.0)) < 1e-12);
}

TEST_CASE("tension of the wulff polygon is twice its area") {
    for (const Norm& n : {Norm::euclidean(), Norm::killed_walk(3.0), Norm::killed_walk(10.0)}) {
        const auto g = build_wulff(n, 2048);
        CHECK(curve_surface_tension(n, g.wulff_polygon) == doctest::Approx(2.0 * g.w).epsilon(1e-3));
        CHECK(g.wulff_polygon.area() == doctest::Approx(g.w).epsilon(1e-12));
        for (const double r : {0.25, 0.5, 1.0}) {
            CHECK(curve_surface_tension(n, g.wulff_polygon.scaled(r)) == doctest::Approx(2.0 * r * g.w).epsilon(1e-3));
        }
    }
}

TEST_CASE("optimal shapes") {
    const auto g = build_wulff(Norm::euclidean(), 1024);
    const double w = g.w;

    SUBCASE("b = w") {
        const auto s = optimal_shape(g, w);
        CHECK(s.radius == doctest::Approx(1.0));
        CHECK(s.tau == doctest::Approx(2 * w));
        const auto v = optimal_shape_value(w, w);
        CHECK(v.radius == doctest::Approx(1.0));
        CHECK(v.tau == doctest::Approx(2 * w));
    }
    SUBCASE("b = 4") {
        const auto s = optimal_shape(g, 4.0);
        CHECK(s.radius == 0.0);
        CHECK(s.tau == doctest::Approx(8.0));
        CHECK(s.polygon.area() == doctest::Approx(4.0));
        CHECK(s.polygon.bounds().hi.x == doctest::Approx(1.0));
    }
    SUBCASE("b = w/4") {
        const auto s = optimal_shape(g, w / 4);
        CHECK(s.radius == doctest::Approx(0.5));
        CHECK(s.tau == doctest::Approx(w));
        CHECK_FALSE(s.plaquette);
    }
    SUBCASE("out of range") {
        CHECK_THROWS(optimal_shape(g, -0.1));
        CHECK_THROWS(optimal_shape(g, 4.1));
    }
}

TEST_CASE("box tension and homogeneity") {
    for (const Norm& n : {Norm::euclidean(), Norm::killed_walk(3.0)}) {
        CHECK(curve_surface_tension(n, box(1.0)) == doctest::Approx(8.0).epsilon(1e-12));
        const Polygon p({{0.1, -0.3}, {0.7, 0.2}, {0.0, 0.6}, {-0.4, 0.1}});
        for (const double l : {0.3, 2.0}) {
            CHECK(curve_surface_tension(n, p.scaled(l)) == doctest::Approx(l * curve_surface_tension(n, p)).epsilon(1e-12));
        }
    }
}

TEST_CASE("tension of the optimal loop: derivative 1/r, monotone") {
    for (const double w : {2.5, pi, 3.7}) {
        double prev = 0.0;
        for (int k = 1; k < 100; ++k) {
            const double b = 4.0 * k / 100.0;
            if (std::abs(b - w) < 2e-5) continue;
            const double h = 1e-5;
            const double d = (optimal_shape_value(w, b + h).tau - optimal_shape_value(w, b - h).tau) / (2 * h);
            const double r = optimal_shape_value(w, b).radius;
            CHECK(d == doctest::Approx(1.0 / r).epsilon(1e-6));
            CHECK(optimal_shape_value(w, b).tau > prev);
            prev = optimal_shape_value(w, b).tau;
        }
    }
}

TEST_CASE("optimal shapes are nested and have the requested area") {
    const int M = 1024;
    const auto g = build_wulff(Norm::killed_walk(3.0), M);
    Polygon prev;
    for (int k = 1; k < 40; ++k) {
        const double b = 4.0 * k / 40.0;
        const auto s = optimal_shape(g, b);
        CHECK(s.polygon.area() == doctest::Approx(b).epsilon(10.0 / M));
        if (!prev.empty()) {
            for (const Vec2 v : prev.vertices()) CHECK(boundary_distance(s.polygon, v) >= 0.0);
            for (const Vec2 v : prev.vertices()) {
                if (boundary_distance(s.polygon, v) > 1e-9) CHECK(s.polygon.contains(v));
            }
        }
        prev = s.polygon;
    }
}

TEST_CASE("polygon helpers") {
    const Polygon sq = box(1.0);
    CHECK(sq.signed_area() == doctest::Approx(4.0));
    CHECK(sq.reversed().signed_area() == doctest::Approx(-4.0));
    CHECK(sq.perimeter() == doctest::Approx(8.0));
    CHECK(sq.contains({0.2, 0.3}));
    CHECK_FALSE(sq.contains({1.2, 0.3}));
    CHECK(convex_hull({{0, 0}, {1, 0}, {0.5, 0.5}, {1, 1}, {0, 1}, {0.5, 0}}).size() == 4);
    CHECK(point_segment_distance({0.5, 1.0}, {0, 0}, {1, 0}) == doctest::Approx(1.0));
    CHECK(segments_cross_properly({0, 0}, {1, 1}, {0, 1}, {1, 0}));
    CHECK_FALSE(segments_cross_properly({0, 0}, {1, 0}, {0, 1}, {1, 1}));
    const auto pts = sample_boundary(sq, 0.1);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const Vec2 a = pts[i], b = pts[(i + 1) % pts.size()];
        CHECK(norm2(b - a) <= 0.1 + 1e-12);
    }
}
