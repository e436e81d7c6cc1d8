#include "facets/wulff.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace facets {

namespace {

// Sutherland-Hodgman step against {x : x . n <= h}.
std::vector<Vec2> clip(const std::vector<Vec2>& poly, Vec2 n, double h) {
    std::vector<Vec2> out;
    out.reserve(poly.size() + 1);
    const std::size_t m = poly.size();
    for (std::size_t i = 0; i < m; ++i) {
        const Vec2 a = poly[i];
        const Vec2 b = poly[(i + 1) % m];
        const double da = dot(a, n) - h;
        const double db = dot(b, n) - h;
        if (da <= 0.0) out.push_back(a);
        if ((da < 0.0 && db > 0.0) || (da > 0.0 && db < 0.0)) {
            const double t = da / (da - db);
            out.push_back(a + (b - a) * t);
        }
    }
    return out;
}

}  // namespace

WulffGeometry build_wulff(const Norm& norm, int facet_count) {
    if (facet_count < 16 || facet_count % 4 != 0) {
        throw std::invalid_argument("facet count must be a multiple of 4 and at least 16, got " + std::to_string(facet_count));
    }
    // The four axis constraints have tau = 1, so the box is the starting polygon.
    std::vector<Vec2> poly{{1.0, -1.0}, {1.0, 1.0}, {-1.0, 1.0}, {-1.0, -1.0}};
    for (int k = 0; k < facet_count; ++k) {
        if (k % (facet_count / 4) == 0) continue;
        const double theta = 2.0 * std::numbers::pi * k / facet_count;
        const Vec2 n{std::cos(theta), std::sin(theta)};
        poly = clip(poly, n, norm(n));
    }
    Polygon wulff = remove_near_duplicates(Polygon(std::move(poly)), 1e-13);
    const Box b = wulff.bounds();
    const double half_width = 0.5 * (b.hi.x - b.lo.x);
    wulff = wulff.scaled(1.0 / half_width);
    const double w = wulff.area();
    return WulffGeometry{norm, std::move(wulff), w, facet_count};
}

ShapeValue optimal_shape_value(double w, double b) {
    if (b < w) {
        const double r = std::sqrt(b / w);
        return {r, 2.0 * std::sqrt(b * w), false};
    }
    const double r = std::sqrt((4.0 - b) / (4.0 - w));
    return {r, 8.0 - 2.0 * std::sqrt((4.0 - w) * (4.0 - b)), true};
}

Polygon wulff_plaquette(const WulffGeometry& geometry, double radius) {
    if (radius <= 0.0) return Polygon({{1.0, -1.0}, {1.0, 1.0}, {-1.0, 1.0}, {-1.0, -1.0}});
    if (radius >= 1.0) return geometry.wulff_polygon;
    const double off = 1.0 - radius;
    std::vector<Vec2> pts;
    pts.reserve(4 * geometry.wulff_polygon.size());
    for (const Vec2 v : geometry.wulff_polygon.vertices()) {
        const Vec2 s = v * radius;
        for (const double sx : {-off, off}) {
            for (const double sy : {-off, off}) pts.push_back({s.x + sx, s.y + sy});
        }
    }
    return convex_hull(std::move(pts));
}

OptimalShape optimal_shape(const WulffGeometry& geometry, double b) {
    if (!(b >= 0.0 && b <= 4.0)) throw std::invalid_argument("optimal shape area must lie in [0, 4]");
    const ShapeValue value = optimal_shape_value(geometry.w, b);
    OptimalShape out;
    out.radius = value.radius;
    out.tau = value.tau;
    out.plaquette = value.plaquette;
    out.polygon = value.plaquette ? wulff_plaquette(geometry, value.radius) : geometry.wulff_polygon.scaled(value.radius);
    return out;
}

double curve_surface_tension(const Norm& norm, const Polygon& polygon) {
    double total = 0.0;
    const std::size_t n = polygon.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 e = polygon[(i + 1) % n] - polygon[i];
        if (e.x == 0.0 && e.y == 0.0) continue;
        total += norm(Vec2{-e.y, e.x});
    }
    return total;
}

}  // namespace facets
