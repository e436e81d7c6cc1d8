#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "facets/geometry.hpp"
#include "facets/lattice.hpp"

namespace facets {

struct LatticePoint {
    int x = 0;
    int y = 0;
    bool operator==(const LatticePoint&) const = default;
};

enum class ContourClass { small, intermediate, large };

/// Closed dual-lattice loop, one unit step per vertex, with the set {h >= level}
/// on its right. Clockwise loops carry sign +1.
struct Contour {
    int level = 0;
    int sign = 0;
    std::vector<LatticePoint> vertices;
    std::int64_t area = 0;  // enclosed cells
    ContourClass label = ContourClass::small;

    int length() const { return static_cast<int>(vertices.size()); }

    /// Cell indices (j * side + i) enclosed by the loop.
    std::vector<int> interior(int side) const;

    /// Corner-only polygon in lattice units, counterclockwise.
    Polygon polygon() const;

    /// Same, rescaled so the box interior sits in [-1, 1]^2 (divide by N about the centre).
    Polygon rescaled(int N) const;
};

struct ContourSet {
    int N = 0;
    std::vector<Contour> contours;

    int count(ContourClass c) const;
};

/// Level-set boundaries of every level; 4-bond vertices are resolved so that the
/// north bond pairs with the east bond and the south bond with the west bond.
ContourSet extract_contours(const HeightField& field);

/// large if |g| >= eps N, small if |g| <= log(N) / eps, intermediate otherwise.
ContourClass classify_length(int length, int N, double epsilon);
void classify(ContourSet& set, double epsilon);

/// Sum of sign * indicator(interior) over the family.
HeightField reconstruct(const ContourSet& set);

/// JSON list of {sign, length, area, vertices}.
void write_contours_json(std::ostream& out, const ContourSet& set);

}  // namespace facets
