#pragma once

#include "facets/geometry.hpp"
#include "facets/norm.hpp"

namespace facets {

inline constexpr int kDefaultFacetCount = 1024;

/// Radius-1 Wulff shape of a norm, discretized as the intersection of
/// `facet_count` half-planes with equally spaced normals.
struct WulffGeometry {
    Norm norm;
    Polygon wulff_polygon;
    double w = 0.0;  // area of the radius-1 Wulff shape
    int facet_count = 0;
};

WulffGeometry build_wulff(const Norm& norm, int facet_count = kDefaultFacetCount);

/// Radius and surface tension of the optimal loop of area b inside [-1,1]^2:
/// a Wulff shape for b < w, a Wulff plaquette for b >= w.
struct ShapeValue {
    double radius = 0.0;
    double tau = 0.0;
    bool plaquette = false;
};

ShapeValue optimal_shape_value(double w, double b);

struct OptimalShape {
    Polygon polygon;
    double radius = 0.0;
    double tau = 0.0;
    bool plaquette = false;
};

/// Centered optimal loop of area b. Throws for b outside [0, 4].
OptimalShape optimal_shape(const WulffGeometry& geometry, double b);

/// Convex hull of four radius-r Wulff shapes pushed into the corners of [-1,1]^2.
Polygon wulff_plaquette(const WulffGeometry& geometry, double radius);

/// Line integral of the norm over the edge normals of a closed polygon.
double curve_surface_tension(const Norm& norm, const Polygon& polygon);

}  // namespace facets
