#include "facets/contours.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "json.hpp"

namespace facets {

namespace {

// N, E, S, W
constexpr int kDx[4] = {0, 1, 0, -1};
constexpr int kDy[4] = {1, 0, -1, 0};

// Exit taken at a 4-bond vertex given the direction of travel on arrival.
constexpr int kSplitExit[4] = {3, 2, 1, 0};

}  // namespace

std::vector<int> Contour::interior(int side) const {
    std::vector<std::vector<int>> crossings(static_cast<std::size_t>(side));
    const std::size_t n = vertices.size();
    for (std::size_t k = 0; k < n; ++k) {
        const LatticePoint a = vertices[k];
        const LatticePoint b = vertices[(k + 1) % n];
        if (a.x != b.x) continue;
        const int row = std::min(a.y, b.y);
        if (row >= 0 && row < side) crossings[static_cast<std::size_t>(row)].push_back(a.x);
    }
    std::vector<int> cells;
    for (int j = 0; j < side; ++j) {
        auto& xs = crossings[static_cast<std::size_t>(j)];
        std::sort(xs.begin(), xs.end());
        for (std::size_t t = 0; t + 1 < xs.size(); t += 2) {
            for (int i = xs[t]; i < xs[t + 1]; ++i) cells.push_back(j * side + i);
        }
    }
    return cells;
}

Polygon Contour::polygon() const {
    std::vector<Vec2> pts;
    const std::size_t n = vertices.size();
    for (std::size_t k = 0; k < n; ++k) {
        const LatticePoint prev = vertices[(k + n - 1) % n];
        const LatticePoint cur = vertices[k];
        const LatticePoint next = vertices[(k + 1) % n];
        const bool straight = (prev.x == cur.x && cur.x == next.x) || (prev.y == cur.y && cur.y == next.y);
        if (!straight) pts.push_back({static_cast<double>(cur.x), static_cast<double>(cur.y)});
    }
    Polygon p(std::move(pts));
    return p.signed_area() < 0.0 ? p.reversed() : p;
}

Polygon Contour::rescaled(int N) const {
    const double centre = (2.0 * N - 1.0) / 2.0;
    return polygon().translated({-centre, -centre}).scaled(1.0 / N);
}

int ContourSet::count(ContourClass c) const {
    return static_cast<int>(std::count_if(contours.begin(), contours.end(), [c](const Contour& g) { return g.label == c; }));
}

ContourSet extract_contours(const HeightField& field) {
    ContourSet out;
    out.N = field.N();
    const int L = field.side();
    const int V = L + 1;
    const int P = L + 2;
    int lo = 0, hi = 0;
    for (const int h : field.values()) {
        lo = std::min(lo, h);
        hi = std::max(hi, h);
    }
    if (lo == hi) return out;

    // zero-padded copy
    std::vector<int> pad(static_cast<std::size_t>(P) * P, 0);
    for (int j = 0; j < L; ++j) {
        std::copy_n(field.values().begin() + static_cast<std::ptrdiff_t>(j) * L, L,
                    pad.begin() + static_cast<std::ptrdiff_t>(j + 1) * P + 1);
    }
    auto ph = [&](int i, int j) { return pad[static_cast<std::size_t>(j + 1) * P + (i + 1)]; };
    auto vid = [V](int x, int y) { return y * V + x; };

    // boundary bonds per level, as (vertex, direction bit)
    std::vector<std::vector<std::pair<int, unsigned char>>> bonds(static_cast<std::size_t>(hi - lo));
    auto mark = [&](int level, int vertex, unsigned bit) {
        bonds[static_cast<std::size_t>(level - lo - 1)].emplace_back(vertex, static_cast<unsigned char>(bit));
    };
    for (int j = 0; j < L; ++j) {
        for (int i = 0; i <= L; ++i) {
            const int e = ph(i, j), w = ph(i - 1, j);
            for (int k = w + 1; k <= e; ++k) mark(k, vid(i, j), 1u << 0);
            for (int k = e + 1; k <= w; ++k) mark(k, vid(i, j + 1), 1u << 2);
        }
    }
    for (int j = 0; j <= L; ++j) {
        for (int i = 0; i < L; ++i) {
            const int n = ph(i, j), s = ph(i, j - 1);
            for (int k = s + 1; k <= n; ++k) mark(k, vid(i + 1, j), 1u << 3);
            for (int k = n + 1; k <= s; ++k) mark(k, vid(i, j), 1u << 1);
        }
    }

    std::vector<unsigned char> mask(static_cast<std::size_t>(V) * V, 0);
    std::vector<unsigned char> remaining(mask.size(), 0);
    for (int level = lo + 1; level <= hi; ++level) {
        auto& list = bonds[static_cast<std::size_t>(level - lo - 1)];
        if (list.empty()) continue;
        std::sort(list.begin(), list.end());
        for (const auto& [v, bit] : list) {
            mask[static_cast<std::size_t>(v)] |= bit;
            remaining[static_cast<std::size_t>(v)] |= bit;
        }
        for (const auto& entry : list) {
            const int start = entry.first;
            const int x = start % V, y = start / V;
            while (remaining[static_cast<std::size_t>(start)]) {
                Contour c;
                c.level = level;
                const int start_dir = std::countr_zero(static_cast<unsigned>(remaining[static_cast<std::size_t>(start)]));
                LatticePoint p{x, y};
                int dir = start_dir;
                std::int64_t twice_area = 0;
                while (true) {
                    remaining[static_cast<std::size_t>(vid(p.x, p.y))] &= static_cast<unsigned char>(~(1u << dir));
                    c.vertices.push_back(p);
                    const LatticePoint q{p.x + kDx[dir], p.y + kDy[dir]};
                    twice_area += static_cast<std::int64_t>(p.x) * q.y - static_cast<std::int64_t>(q.x) * p.y;
                    p = q;
                    const unsigned m = mask[static_cast<std::size_t>(vid(p.x, p.y))];
                    const int next = std::popcount(m) == 1 ? std::countr_zero(m) : kSplitExit[dir];
                    if (p == LatticePoint{x, y} && next == start_dir) break;
                    if (!(remaining[static_cast<std::size_t>(vid(p.x, p.y))] & (1u << next))) {
                        throw std::logic_error("contour walk lost its way");
                    }
                    dir = next;
                }
                c.sign = twice_area < 0 ? 1 : -1;
                c.area = std::abs(twice_area) / 2;
                out.contours.push_back(std::move(c));
            }
        }
        for (const auto& [v, bit] : list) mask[static_cast<std::size_t>(v)] = 0;
    }
    return out;
}

ContourClass classify_length(int length, int N, double epsilon) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    if (length >= epsilon * N) return ContourClass::large;
    if (length <= std::log(static_cast<double>(N)) / epsilon) return ContourClass::small;
    return ContourClass::intermediate;
}

void classify(ContourSet& set, double epsilon) {
    for (auto& c : set.contours) c.label = classify_length(c.length(), set.N, epsilon);
}

HeightField reconstruct(const ContourSet& set) {
    HeightField field(set.N);
    std::vector<int> h(static_cast<std::size_t>(field.cells()), 0);
    for (const auto& c : set.contours) {
        for (const int idx : c.interior(field.side())) h[static_cast<std::size_t>(idx)] += c.sign;
    }
    for (int idx = 0; idx < field.cells(); ++idx) {
        if (!field.in_range(h[static_cast<std::size_t>(idx)])) throw std::runtime_error("contour family reconstructs an out-of-range height");
        field.set_index(idx, h[static_cast<std::size_t>(idx)]);
    }
    return field;
}

void write_contours_json(std::ostream& out, const ContourSet& set) {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& c : set.contours) {
        nlohmann::json verts = nlohmann::json::array();
        for (const auto& p : c.vertices) verts.push_back({p.x, p.y});
        list.push_back({{"sign", c.sign}, {"length", c.length()}, {"area", c.area}, {"level", c.level}, {"vertices", std::move(verts)}});
    }
    out << list.dump() << "\n";
}

}  // namespace facets
