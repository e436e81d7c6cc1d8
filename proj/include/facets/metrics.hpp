#pragma once

#include <optional>
#include <vector>

#include "facets/contours.hpp"
#include "facets/geometry.hpp"
#include "facets/stack.hpp"
#include "facets/wulff.hpp"

namespace facets {

using CurveSet = std::vector<Polygon>;

inline constexpr double kBoundarySpacing = 1e-3;
inline constexpr double kShiftStep = 2e-3;

/// Uniform bucket grid over polygon edges for nearest-edge queries.
class SegmentIndex {
public:
    SegmentIndex() = default;
    explicit SegmentIndex(const CurveSet& curves);

    bool empty() const { return segments_.empty(); }
    /// Euclidean distance from p to the union of edges.
    double distance(Vec2 p) const;

private:
    struct Segment {
        Vec2 a, b;
    };
    std::vector<Segment> segments_;
    std::vector<std::vector<int>> buckets_;
    Vec2 origin_{};
    double cell_ = 1.0;
    int nx_ = 0, ny_ = 0;
};

std::vector<Vec2> sample_curves(const CurveSet& curves, double spacing);

/// sup over P of the distance to Q.
double directed_hausdorff(const CurveSet& P, const CurveSet& Q, double spacing = kBoundarySpacing);
double directed_hausdorff_serial(const CurveSet& P, const CurveSet& Q, double spacing = kBoundarySpacing);

/// Symmetric Hausdorff distance of the boundaries. Throws on empty input.
double hausdorff(const CurveSet& P, const CurveSet& Q, double spacing = kBoundarySpacing);
double hausdorff_serial(const CurveSet& P, const CurveSet& Q, double spacing = kBoundarySpacing);
double hausdorff(const Polygon& P, const Polygon& Q, double spacing = kBoundarySpacing);

struct ShiftResult {
    double distance = 0.0;
    Vec2 shift{};
};

/// Shifts x with x + bounds(template) inside the container.
Box admissible_shifts(const CurveSet& templ, const Box& container);

/// min over admissible x of hausdorff(P, x + template), by branch and bound on the
/// 1-Lipschitz map x -> distance; resolution `step`.
ShiftResult best_shift_hausdorff(const CurveSet& P, const CurveSet& templ, const Box& container = Box::unit(),
                                 double step = kShiftStep);

/// Optimal stack drawn in [-1,1]^2, bottom layer first.
struct StackPrediction {
    std::vector<Polygon> layers;

    int height(Vec2 y) const;
};

StackPrediction predict_stack(const WulffGeometry& geometry, const Stack& stack);

/// Observed level lines grouped by nesting depth.
struct LevelFamily {
    std::vector<CurveSet> levels;  // levels[j] holds the loops of depth j + 1

    int height(Vec2 y) const;
    static LevelFamily from_loops(const CurveSet& loops);
    static LevelFamily from_prediction(const StackPrediction& prediction);
};

/// Large positive level lines of a field, in [-1,1]^2 coordinates.
CurveSet large_level_lines(const HeightField& field, double epsilon);

struct EpigraphReport {
    double distance = 0.0;
    Vec2 top_shift{};
    std::vector<std::optional<double>> per_layer;  // empty entry when a layer is missing on one side
    int observed_layers = 0;
    int predicted_layers = 0;
};

/// Hausdorff distance between the regions under the two height functions in
/// [-1,1]^2 x R, minimized over admissible shifts of the top predicted layer.
EpigraphReport epigraph_distance(const LevelFamily& observed, const StackPrediction& prediction,
                                 const Box& container = Box::unit());

struct Skeleton {
    std::vector<LatticePoint> vertices;
    int contour_id = -1;

    /// Closed polygon in [-1,1]^2 coordinates.
    Polygon rescaled(int N) const;
};

/// First-exit rule: next vertex is the first later contour vertex at l1 distance > hop.
Skeleton skeletonize(const Contour& contour, int hop, int contour_id = -1);

}  // namespace facets
