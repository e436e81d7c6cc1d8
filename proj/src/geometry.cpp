#include "facets/geometry.hpp"

#include <algorithm>
#include <limits>

namespace facets {

double Polygon::signed_area() const {
    const std::size_t n = vertices_.size();
    if (n < 3) return 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = vertices_[i];
        const Vec2 b = vertices_[(i + 1) % n];
        s += cross(a, b);
    }
    return 0.5 * s;
}

double Polygon::perimeter() const {
    const std::size_t n = vertices_.size();
    if (n < 2) return 0.0;
    double p = 0.0;
    for (std::size_t i = 0; i < n; ++i) p += norm2(vertices_[(i + 1) % n] - vertices_[i]);
    return p;
}

Box Polygon::bounds() const {
    Box b{{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()},
          {-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()}};
    for (const Vec2 v : vertices_) {
        b.lo.x = std::min(b.lo.x, v.x);
        b.lo.y = std::min(b.lo.y, v.y);
        b.hi.x = std::max(b.hi.x, v.x);
        b.hi.y = std::max(b.hi.y, v.y);
    }
    return b;
}

Polygon Polygon::translated(Vec2 shift) const {
    std::vector<Vec2> out;
    out.reserve(vertices_.size());
    for (const Vec2 v : vertices_) out.push_back(v + shift);
    return Polygon(std::move(out));
}

Polygon Polygon::scaled(double factor) const {
    std::vector<Vec2> out;
    out.reserve(vertices_.size());
    for (const Vec2 v : vertices_) out.push_back(v * factor);
    return Polygon(std::move(out));
}

Polygon Polygon::reversed() const {
    return Polygon(std::vector<Vec2>(vertices_.rbegin(), vertices_.rend()));
}

bool Polygon::contains(Vec2 p) const {
    bool inside = false;
    const std::size_t n = vertices_.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vec2 a = vertices_[i];
        const Vec2 b = vertices_[j];
        if ((a.y > p.y) != (b.y > p.y)) {
            const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (p.x < x) inside = !inside;
        }
    }
    return inside;
}

Polygon convex_hull(std::vector<Vec2> pts) {
    std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) return Polygon(pts);
    std::vector<Vec2> hull(2 * pts.size());
    std::size_t k = 0;
    for (const Vec2 p : pts) {
        while (k >= 2 && cross(hull[k - 1] - hull[k - 2], p - hull[k - 2]) <= 0) --k;
        hull[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
        const Vec2 p = pts[i];
        while (k >= t && cross(hull[k - 1] - hull[k - 2], p - hull[k - 2]) <= 0) --k;
        hull[k++] = p;
    }
    hull.resize(k - 1);
    return Polygon(std::move(hull));
}

Polygon remove_near_duplicates(const Polygon& poly, double tol) {
    std::vector<Vec2> out;
    for (const Vec2 v : poly.vertices()) {
        if (out.empty() || norm2(v - out.back()) > tol) out.push_back(v);
    }
    while (out.size() > 1 && norm2(out.front() - out.back()) <= tol) out.pop_back();
    return Polygon(std::move(out));
}

std::vector<Vec2> sample_boundary(const Polygon& poly, double spacing) {
    std::vector<Vec2> out;
    const std::size_t n = poly.size();
    if (n == 0) return out;
    if (n == 1) return {poly[0]};
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = poly[i];
        const Vec2 b = poly[(i + 1) % n];
        const double len = norm2(b - a);
        const auto pieces = static_cast<std::size_t>(std::max(1.0, std::ceil(len / spacing)));
        for (std::size_t k = 0; k < pieces; ++k) {
            const double t = static_cast<double>(k) / static_cast<double>(pieces);
            out.push_back(a + (b - a) * t);
        }
    }
    return out;
}

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
    const Vec2 ab = b - a;
    const double len2 = dot(ab, ab);
    double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return norm2(p - (a + ab * t));
}

double boundary_distance(const Polygon& poly, Vec2 p) {
    double best = std::numeric_limits<double>::infinity();
    const std::size_t n = poly.size();
    if (n == 1) return norm2(p - poly[0]);
    for (std::size_t i = 0; i < n; ++i) best = std::min(best, point_segment_distance(p, poly[i], poly[(i + 1) % n]));
    return best;
}

bool segments_cross_properly(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    const double d1 = cross(b - a, c - a);
    const double d2 = cross(b - a, d - a);
    const double d3 = cross(d - c, a - c);
    const double d4 = cross(d - c, b - c);
    return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

}  // namespace facets
