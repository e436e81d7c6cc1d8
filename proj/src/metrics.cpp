#include "facets/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

namespace facets {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Box bounds_of(const CurveSet& curves) {
    Box b{{kInf, kInf}, {-kInf, -kInf}};
    for (const auto& poly : curves) {
        const Box pb = poly.bounds();
        b.lo = {std::min(b.lo.x, pb.lo.x), std::min(b.lo.y, pb.lo.y)};
        b.hi = {std::max(b.hi.x, pb.hi.x), std::max(b.hi.y, pb.hi.y)};
    }
    return b;
}

bool has_points(const CurveSet& curves) {
    return std::any_of(curves.begin(), curves.end(), [](const Polygon& p) { return !p.empty(); });
}

}  // namespace

SegmentIndex::SegmentIndex(const CurveSet& curves) {
    for (const auto& poly : curves) {
        const std::size_t n = poly.size();
        for (std::size_t i = 0; i < n; ++i) segments_.push_back({poly[i], poly[(i + 1) % n]});
    }
    if (segments_.empty()) return;
    const Box b = bounds_of(curves);
    const double extent = std::max({b.hi.x - b.lo.x, b.hi.y - b.lo.y, 1e-9});
    const int per_side = std::clamp(static_cast<int>(std::ceil(std::sqrt(static_cast<double>(segments_.size())))), 1, 512);
    cell_ = extent / per_side * (1.0 + 1e-9);
    origin_ = b.lo;
    nx_ = std::max(1, static_cast<int>(std::ceil((b.hi.x - b.lo.x) / cell_)) + 1);
    ny_ = std::max(1, static_cast<int>(std::ceil((b.hi.y - b.lo.y) / cell_)) + 1);
    buckets_.assign(static_cast<std::size_t>(nx_) * ny_, {});
    for (int s = 0; s < static_cast<int>(segments_.size()); ++s) {
        const Segment& seg = segments_[static_cast<std::size_t>(s)];
        const int x0 = static_cast<int>((std::min(seg.a.x, seg.b.x) - origin_.x) / cell_);
        const int x1 = static_cast<int>((std::max(seg.a.x, seg.b.x) - origin_.x) / cell_);
        const int y0 = static_cast<int>((std::min(seg.a.y, seg.b.y) - origin_.y) / cell_);
        const int y1 = static_cast<int>((std::max(seg.a.y, seg.b.y) - origin_.y) / cell_);
        for (int y = std::max(0, y0); y <= std::min(ny_ - 1, y1); ++y) {
            for (int x = std::max(0, x0); x <= std::min(nx_ - 1, x1); ++x) {
                buckets_[static_cast<std::size_t>(y) * nx_ + x].push_back(s);
            }
        }
    }
}

double SegmentIndex::distance(Vec2 p) const {
    if (segments_.empty()) return kInf;
    const int cx = std::clamp(static_cast<int>(std::floor((p.x - origin_.x) / cell_)), 0, nx_ - 1);
    const int cy = std::clamp(static_cast<int>(std::floor((p.y - origin_.y) / cell_)), 0, ny_ - 1);
    double best = kInf;
    const int max_ring = std::max(nx_, ny_);
    for (int r = 0; r <= max_ring; ++r) {
        for (int y = cy - r; y <= cy + r; ++y) {
            if (y < 0 || y >= ny_) continue;
            const bool edge_row = y == cy - r || y == cy + r;
            for (int x = cx - r; x <= cx + r; x += edge_row ? 1 : 2 * r) {
                if (x >= 0 && x < nx_) {
                    for (const int s : buckets_[static_cast<std::size_t>(y) * nx_ + x]) {
                        const Segment& seg = segments_[static_cast<std::size_t>(s)];
                        best = std::min(best, point_segment_distance(p, seg.a, seg.b));
                    }
                }
                if (r == 0) break;
            }
        }
        if (best <= r * cell_) break;
    }
    return best;
}

std::vector<Vec2> sample_curves(const CurveSet& curves, double spacing) {
    std::vector<Vec2> out;
    for (const auto& poly : curves) {
        if (poly.empty()) continue;
        const auto pts = sample_boundary(poly, spacing);
        out.insert(out.end(), pts.begin(), pts.end());
    }
    return out;
}

double directed_hausdorff_serial(const CurveSet& P, const CurveSet& Q, double spacing) {
    if (!has_points(P) || !has_points(Q)) throw std::invalid_argument("Hausdorff distance of an empty curve set");
    const SegmentIndex index(Q);
    double worst = 0.0;
    for (const Vec2 p : sample_curves(P, spacing)) worst = std::max(worst, index.distance(p));
    return worst;
}

double directed_hausdorff(const CurveSet& P, const CurveSet& Q, double spacing) {
    if (!has_points(P) || !has_points(Q)) throw std::invalid_argument("Hausdorff distance of an empty curve set");
    const SegmentIndex index(Q);
    const std::vector<Vec2> pts = sample_curves(P, spacing);
    const long n = static_cast<long>(pts.size());
    double worst = 0.0;
#pragma omp parallel for reduction(max : worst) schedule(static)
    for (long i = 0; i < n; ++i) worst = std::max(worst, index.distance(pts[static_cast<std::size_t>(i)]));
    return worst;
}

double hausdorff(const CurveSet& P, const CurveSet& Q, double spacing) {
    return std::max(directed_hausdorff(P, Q, spacing), directed_hausdorff(Q, P, spacing));
}

double hausdorff_serial(const CurveSet& P, const CurveSet& Q, double spacing) {
    return std::max(directed_hausdorff_serial(P, Q, spacing), directed_hausdorff_serial(Q, P, spacing));
}

double hausdorff(const Polygon& P, const Polygon& Q, double spacing) { return hausdorff(CurveSet{P}, CurveSet{Q}, spacing); }

Box admissible_shifts(const CurveSet& templ, const Box& container) {
    const Box b = bounds_of(templ);
    const Box out{{container.lo.x - b.lo.x, container.lo.y - b.lo.y}, {container.hi.x - b.hi.x, container.hi.y - b.hi.y}};
    if (out.lo.x > out.hi.x + 1e-12 || out.lo.y > out.hi.y + 1e-12) throw std::invalid_argument("template does not fit in the container");
    return {{std::min(out.lo.x, out.hi.x), std::min(out.lo.y, out.hi.y)}, {std::max(out.lo.x, out.hi.x), std::max(out.lo.y, out.hi.y)}};
}

namespace {

Box intersect(const Box& a, const Box& b) {
    Box out{{std::max(a.lo.x, b.lo.x), std::max(a.lo.y, b.lo.y)}, {std::min(a.hi.x, b.hi.x), std::min(a.hi.y, b.hi.y)}};
    out.hi = {std::max(out.hi.x, out.lo.x), std::max(out.hi.y, out.lo.y)};
    return out;
}

// Branch and bound for a 1-Lipschitz function on a box.
template <class F>
ShiftResult minimize_lipschitz(F&& f, const Box& domain, double tol, int max_evals = 20000) {
    struct Cell {
        Box box;
        double lower;
        bool operator<(const Cell& o) const { return lower > o.lower; }
    };
    auto centre = [](const Box& b) { return Vec2{0.5 * (b.lo.x + b.hi.x), 0.5 * (b.lo.y + b.hi.y)}; };
    auto radius = [](const Box& b) { return 0.5 * std::hypot(b.hi.x - b.lo.x, b.hi.y - b.lo.y); };
    ShiftResult best{f(centre(domain)), centre(domain)};
    std::priority_queue<Cell> queue;
    queue.push({domain, best.distance - radius(domain)});
    int evals = 1;
    while (!queue.empty() && evals < max_evals) {
        const Cell top = queue.top();
        queue.pop();
        if (top.lower >= best.distance - tol) break;
        if (radius(top.box) <= 0.5 * tol) continue;
        const Vec2 c = centre(top.box);
        const bool split_x = top.box.hi.x - top.box.lo.x > 0.25 * tol;
        const bool split_y = top.box.hi.y - top.box.lo.y > 0.25 * tol;
        std::vector<Box> kids;
        for (int ix = 0; ix < (split_x ? 2 : 1); ++ix) {
            for (int iy = 0; iy < (split_y ? 2 : 1); ++iy) {
                Box k = top.box;
                if (split_x) (ix ? k.lo.x : k.hi.x) = c.x;
                if (split_y) (iy ? k.lo.y : k.hi.y) = c.y;
                kids.push_back(k);
            }
        }
        for (const Box& k : kids) {
            const Vec2 kc = centre(k);
            const double v = f(kc);
            ++evals;
            if (v < best.distance) best = {v, kc};
            const double lower = v - radius(k);
            if (lower < best.distance - tol) queue.push({k, lower});
        }
    }
    return best;
}

// Hausdorff distance between P and x + T as a function of x, on fixed samples.
struct ShiftedHausdorff {
    std::vector<Vec2> p_samples, t_samples;
    SegmentIndex p_index, t_index;

    ShiftedHausdorff(const CurveSet& P, const CurveSet& T, double spacing)
        : p_samples(sample_curves(P, spacing)), t_samples(sample_curves(T, spacing)), p_index(P), t_index(T) {}

    double operator()(Vec2 x) const {
        double worst = 0.0;
        for (const Vec2 p : p_samples) worst = std::max(worst, t_index.distance(p - x));
        for (const Vec2 t : t_samples) worst = std::max(worst, p_index.distance(t + x));
        return worst;
    }
};

}  // namespace

ShiftResult best_shift_hausdorff(const CurveSet& P, const CurveSet& templ, const Box& container, double step) {
    if (!has_points(P) || !has_points(templ)) throw std::invalid_argument("Hausdorff distance of an empty curve set");
    const Box domain = admissible_shifts(templ, container);
    const double coarse_spacing = 5.0 * kBoundarySpacing;
    const ShiftedHausdorff coarse(P, templ, coarse_spacing);
    const ShiftResult rough = minimize_lipschitz(coarse, domain, step);
    const ShiftedHausdorff fine(P, templ, kBoundarySpacing);
    const double reach = coarse_spacing + step;
    const Box local = intersect(domain, {{rough.shift.x - reach, rough.shift.y - reach}, {rough.shift.x + reach, rough.shift.y + reach}});
    ShiftResult best = minimize_lipschitz(fine, local, 0.5 * step, 400);
    if (domain.contains({0.0, 0.0})) {
        const double at_zero = fine({0.0, 0.0});
        if (at_zero < best.distance) best = {at_zero, {0.0, 0.0}};
    }
    return best;
}

int StackPrediction::height(Vec2 y) const {
    int h = 0;
    for (const auto& layer : layers) h += layer.contains(y) ? 1 : 0;
    return h;
}

StackPrediction predict_stack(const WulffGeometry& geometry, const Stack& stack) {
    StackPrediction out;
    if (stack.kind == StackKind::empty || stack.layers == 0) return out;
    if (!stack.finite()) throw std::invalid_argument("cannot draw an infinite-energy stack");
    const Polygon plaquette = wulff_plaquette(geometry, stack.radius);
    if (stack.kind == StackKind::type2) {
        out.layers.assign(static_cast<std::size_t>(stack.layers), plaquette);
    } else {
        out.layers.assign(static_cast<std::size_t>(stack.layers - 1), plaquette);
        out.layers.push_back(geometry.wulff_polygon.scaled(stack.radius));
    }
    return out;
}

int LevelFamily::height(Vec2 y) const {
    int h = 0;
    for (const auto& level : levels) {
        if (std::any_of(level.begin(), level.end(), [y](const Polygon& p) { return p.contains(y); })) ++h;
    }
    return h;
}

LevelFamily LevelFamily::from_loops(const CurveSet& loops) {
    LevelFamily out;
    const std::vector<int> depth = nesting_depths(loops);
    for (std::size_t i = 0; i < loops.size(); ++i) {
        const auto d = static_cast<std::size_t>(depth[i]);
        if (out.levels.size() < d) out.levels.resize(d);
        out.levels[d - 1].push_back(loops[i]);
    }
    return out;
}

LevelFamily LevelFamily::from_prediction(const StackPrediction& prediction) {
    LevelFamily out;
    for (const auto& layer : prediction.layers) out.levels.push_back({layer});
    return out;
}

namespace {

// One side of the epigraph comparison: level regions, their edge indices and sample points.
struct Terraces {
    std::vector<CurveSet> levels;
    std::vector<SegmentIndex> index;
    std::vector<std::vector<Vec2>> samples;
    int shifted_level = -1;  // level whose loops move with the shift

    Terraces(const std::vector<CurveSet>& lv, double spacing, double grid, const Box& container) : levels(lv) {
        for (const auto& level : levels) {
            index.emplace_back(level);
            std::vector<Vec2> pts = sample_curves(level, spacing);
            for (double y = container.lo.y + 0.5 * grid; y < container.hi.y; y += grid) {
                for (double x = container.lo.x + 0.5 * grid; x < container.hi.x; x += grid) {
                    const Vec2 p{x, y};
                    if (std::any_of(level.begin(), level.end(), [p](const Polygon& poly) { return poly.contains(p); })) pts.push_back(p);
                }
            }
            samples.push_back(std::move(pts));
        }
    }

    int count() const { return static_cast<int>(levels.size()); }

    // Distance from y to the region of level k (1-based), the whole box for k = 0.
    double region_distance(int k, Vec2 y, Vec2 shift) const {
        if (k == 0) return 0.0;
        if (k > count()) return kInf;
        const Vec2 q = k - 1 == shifted_level ? y - shift : y;
        const auto& level = levels[static_cast<std::size_t>(k - 1)];
        if (std::any_of(level.begin(), level.end(), [q](const Polygon& poly) { return poly.contains(q); })) return 0.0;
        return index[static_cast<std::size_t>(k - 1)].distance(q);
    }
};

double directed_epigraph(const Terraces& from, const Terraces& to, Vec2 shift) {
    double worst = 0.0;
    for (int j = 1; j <= from.count(); ++j) {
        const bool moved = j - 1 == from.shifted_level;
        for (const Vec2 s : from.samples[static_cast<std::size_t>(j - 1)]) {
            const Vec2 y = moved ? s + shift : s;
            double best = j;
            for (int k = std::min(j, to.count()); k >= 1 && j - k < best; --k) {
                best = std::min(best, std::hypot(to.region_distance(k, y, shift), static_cast<double>(j - k)));
            }
            worst = std::max(worst, best);
        }
    }
    return worst;
}

}  // namespace

EpigraphReport epigraph_distance(const LevelFamily& observed, const StackPrediction& prediction, const Box& container) {
    EpigraphReport report;
    report.observed_layers = static_cast<int>(observed.levels.size());
    report.predicted_layers = static_cast<int>(prediction.layers.size());
    std::vector<CurveSet> predicted;
    for (const auto& layer : prediction.layers) predicted.push_back({layer});

    auto evaluate = [&](double spacing, double grid) {
        Terraces obs(observed.levels, spacing, grid, container);
        Terraces pred(predicted, spacing, grid, container);
        pred.shifted_level = report.predicted_layers - 1;
        return std::make_pair(std::move(obs), std::move(pred));
    };

    if (report.predicted_layers == 0) {
        auto [obs, pred] = evaluate(kBoundarySpacing, 0.05);
        report.distance = std::max(directed_epigraph(obs, pred, {}), directed_epigraph(pred, obs, {}));
    } else {
        const Box domain = admissible_shifts(predicted.back(), container);
        auto [obs_c, pred_c] = evaluate(5.0 * kBoundarySpacing, 0.1);
        auto coarse = [&](Vec2 x) { return std::max(directed_epigraph(obs_c, pred_c, x), directed_epigraph(pred_c, obs_c, x)); };
        const ShiftResult rough = minimize_lipschitz(coarse, domain, kShiftStep, 4000);
        auto [obs_f, pred_f] = evaluate(kBoundarySpacing, 0.05);
        auto fine = [&](Vec2 x) { return std::max(directed_epigraph(obs_f, pred_f, x), directed_epigraph(pred_f, obs_f, x)); };
        const double reach = 5.0 * kBoundarySpacing + kShiftStep;
        const Box local = intersect(domain, {{rough.shift.x - reach, rough.shift.y - reach}, {rough.shift.x + reach, rough.shift.y + reach}});
        ShiftResult best = minimize_lipschitz(fine, local, kShiftStep, 200);
        if (domain.contains({0.0, 0.0})) {
            const double at_zero = fine({0.0, 0.0});
            if (at_zero < best.distance) best = {at_zero, {0.0, 0.0}};
        }
        report.distance = best.distance;
        report.top_shift = best.shift;
    }

    const int layers = std::max(report.observed_layers, report.predicted_layers);
    for (int j = 0; j < layers; ++j) {
        if (j >= report.observed_layers || j >= report.predicted_layers) {
            report.per_layer.emplace_back();
            continue;
        }
        const CurveSet& obs = observed.levels[static_cast<std::size_t>(j)];
        if (j == report.predicted_layers - 1) {
            report.per_layer.emplace_back(best_shift_hausdorff(obs, predicted[static_cast<std::size_t>(j)], container).distance);
        } else {
            report.per_layer.emplace_back(hausdorff(obs, predicted[static_cast<std::size_t>(j)]));
        }
    }
    return report;
}

Polygon Skeleton::rescaled(int N) const {
    const double centre = (2.0 * N - 1.0) / 2.0;
    std::vector<Vec2> pts;
    for (const auto& v : vertices) pts.push_back({(v.x - centre) / N, (v.y - centre) / N});
    return Polygon(std::move(pts));
}

Skeleton skeletonize(const Contour& contour, int hop, int contour_id) {
    if (hop < 1) throw std::invalid_argument("skeleton hop must be >= 1");
    Skeleton out;
    out.contour_id = contour_id;
    if (contour.vertices.empty()) return out;
    LatticePoint anchor = contour.vertices.front();
    out.vertices.push_back(anchor);
    for (const LatticePoint& u : contour.vertices) {
        if (std::abs(u.x - anchor.x) + std::abs(u.y - anchor.y) > hop) {
            anchor = u;
            out.vertices.push_back(anchor);
        }
    }
    return out;
}

CurveSet large_level_lines(const HeightField& field, double epsilon) {
    ContourSet set = extract_contours(field);
    classify(set, epsilon);
    CurveSet loops;
    for (const auto& c : set.contours) {
        if (c.sign > 0 && c.label == ContourClass::large) loops.push_back(c.rescaled(field.N()));
    }
    return loops;
}

}  // namespace facets
