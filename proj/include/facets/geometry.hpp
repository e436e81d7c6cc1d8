#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace facets {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    bool operator==(const Vec2&) const = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm2(Vec2 a) { return std::hypot(a.x, a.y); }

/// Axis-aligned rectangle, used as the container for shifted shapes.
struct Box {
    Vec2 lo{-1.0, -1.0};
    Vec2 hi{1.0, 1.0};

    static Box unit() { return {}; }
    bool contains(Vec2 p, double tol = 0.0) const {
        return p.x >= lo.x - tol && p.x <= hi.x + tol && p.y >= lo.y - tol && p.y <= hi.y + tol;
    }
};

/// Closed polygon; vertices are stored once (the closing edge is implicit).
class Polygon {
public:
    Polygon() = default;
    explicit Polygon(std::vector<Vec2> vertices) : vertices_(std::move(vertices)) {}

    const std::vector<Vec2>& vertices() const { return vertices_; }
    std::size_t size() const { return vertices_.size(); }
    bool empty() const { return vertices_.empty(); }
    Vec2 operator[](std::size_t i) const { return vertices_[i]; }

    /// Shoelace area, positive for counterclockwise orientation.
    double signed_area() const;
    double area() const { return std::abs(signed_area()); }
    double perimeter() const;
    Box bounds() const;

    Polygon translated(Vec2 shift) const;
    Polygon scaled(double factor) const;
    /// Same loop traversed in the opposite direction.
    Polygon reversed() const;

    /// Crossing-number test; points exactly on the boundary may go either way.
    bool contains(Vec2 p) const;

private:
    std::vector<Vec2> vertices_;
};

/// Andrew's monotone chain; counterclockwise, collinear points dropped.
Polygon convex_hull(std::vector<Vec2> points);

/// Drops consecutive vertices closer than `tol`.
Polygon remove_near_duplicates(const Polygon& poly, double tol);

/// Points along the boundary at arc-length spacing at most `spacing`, vertices included.
std::vector<Vec2> sample_boundary(const Polygon& poly, double spacing);

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b);

/// Distance from `p` to the closest boundary edge.
double boundary_distance(const Polygon& poly, Vec2 p);

/// True when segments [a,b] and [c,d] cross at a single interior point of both.
bool segments_cross_properly(Vec2 a, Vec2 b, Vec2 c, Vec2 d);

}  // namespace facets
