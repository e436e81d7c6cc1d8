#include "facets/norm.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace facets {

namespace {

constexpr double kQuarterPi = std::numbers::pi / 4.0;
constexpr double kHalfPi = std::numbers::pi / 2.0;

double fold_angle(double theta) {
    double phi = std::fmod(theta, kHalfPi);
    if (phi < 0.0) phi += kHalfPi;
    if (phi > kQuarterPi) phi = kHalfPi - phi;
    return phi;
}

}  // namespace

std::string_view to_string(NormFamily family) {
    switch (family) {
        case NormFamily::euclidean: return "euclidean";
        case NormFamily::killed_walk: return "killed_walk";
        case NormFamily::sampled: return "sampled";
    }
    return "unknown";
}

NormFamily parse_norm_family(std::string_view tag) {
    if (tag == "euclidean") return NormFamily::euclidean;
    if (tag == "killed_walk") return NormFamily::killed_walk;
    if (tag == "sampled") return NormFamily::sampled;
    throw std::invalid_argument("unknown norm family '" + std::string(tag) + "'");
}

Norm Norm::euclidean() {
    Norm n;
    n.family_ = NormFamily::euclidean;
    return n;
}

Norm Norm::killed_walk(double beta) {
    if (!(beta > std::log(4.0))) {
        throw std::invalid_argument("killed_walk norm needs beta > ln 4 (rate region is empty otherwise)");
    }
    Norm n;
    n.family_ = NormFamily::killed_walk;
    n.params_.beta = beta;
    n.half_rate_ = 0.5 * std::exp(beta);
    n.axis_scale_ = n.raw_fundamental(1.0, 0.0);
    return n;
}

Norm Norm::sampled(std::vector<AngularSample> table) {
    std::vector<AngularSample> folded;
    folded.reserve(table.size());
    for (const auto& s : table) {
        if (!(s.value > 0.0) || !std::isfinite(s.value)) throw std::invalid_argument("sampled norm values must be positive");
        folded.push_back({fold_angle(s.theta), s.value});
    }
    std::sort(folded.begin(), folded.end(), [](const auto& a, const auto& b) { return a.theta < b.theta; });
    std::vector<AngularSample> merged;
    for (const auto& s : folded) {
        if (!merged.empty() && s.theta - merged.back().theta < 1e-9) {
            if (std::abs(s.value - merged.back().value) > 1e-6 * merged.back().value) {
                throw std::invalid_argument("sampled norm table is not lattice symmetric");
            }
            continue;
        }
        merged.push_back(s);
    }
    if (merged.empty() || merged.front().theta > 1e-9 || merged.back().theta < kQuarterPi - 1e-9) {
        throw std::invalid_argument("sampled norm table must cover the angles 0 and pi/4");
    }
    merged.front().theta = 0.0;
    merged.back().theta = kQuarterPi;

    // dual points n / value must form a convex chain, mirrored images included
    std::vector<Vec2> dual;
    auto push = [&](double theta, double value) { dual.push_back(Vec2{std::cos(theta), std::sin(theta)} * (1.0 / value)); };
    if (merged.size() > 1) push(-merged[1].theta, merged[1].value);
    for (const auto& s : merged) push(s.theta, s.value);
    if (merged.size() > 1) push(2.0 * kQuarterPi - merged[merged.size() - 2].theta, merged[merged.size() - 2].value);
    for (std::size_t k = 1; k + 1 < dual.size(); ++k) {
        const Vec2 a = dual[k - 1], b = dual[k], c = dual[k + 1];
        if (cross(c - a, b - a) > 1e-12 * norm2(c - a) * norm2(b - a) + 1e-15) {
            throw std::invalid_argument("sampled norm table violates the triangle inequality");
        }
    }

    Norm n;
    n.family_ = NormFamily::sampled;
    n.params_.table = std::move(table);
    n.folded_ = std::move(merged);
    n.axis_scale_ = n.folded_.front().value;
    return n;
}

double Norm::raw_fundamental(double c, double s) const {
    switch (family_) {
        case NormFamily::euclidean:
            return 1.0;
        case NormFamily::killed_walk: {
            // sqrt(1 + p c^2) + sqrt(1 + p s^2) = C with p = lambda^2, rationalized root.
            const double C = half_rate_;
            const double d = c * c - s * s;
            const double p = C * (C * C - 4.0) / (C + std::sqrt(C * C - d * d * (C * C - 4.0)));
            const double lambda = std::sqrt(p);
            return c * std::asinh(lambda * c) + s * std::asinh(lambda * s);
        }
        case NormFamily::sampled: {
            const double phi = std::atan2(s, c);
            auto it = std::upper_bound(folded_.begin(), folded_.end(), phi,
                                       [](double v, const AngularSample& a) { return v < a.theta; });
            if (it == folded_.begin()) return folded_.front().value;
            if (it == folded_.end()) return folded_.back().value;
            const auto& hi = *it;
            const auto& lo = *(it - 1);
            // support function of the polygon cut out by the two sample half-planes
            const double det = std::sin(hi.theta - lo.theta);
            const double mx = (lo.value * std::sin(hi.theta) - hi.value * std::sin(lo.theta)) / det;
            const double my = (hi.value * std::cos(lo.theta) - lo.value * std::cos(hi.theta)) / det;
            return c * mx + s * my;
        }
    }
    return 1.0;
}

double Norm::operator()(Vec2 x) const {
    double a = std::abs(x.x);
    double b = std::abs(x.y);
    if (b > a) std::swap(a, b);
    const double len = std::hypot(a, b);
    if (len == 0.0) return 0.0;
    return len * raw_fundamental(a / len, b / len) / axis_scale_;
}

double Norm::operator()(double theta) const {
    // fold onto [0, pi/4] on a 2^-40 grid so quarter turns give identical values
    double r = std::abs(std::remainder(theta, std::numbers::pi / 2));
    r = std::ldexp(std::round(std::ldexp(r, 40)), -40);
    return raw_fundamental(std::cos(r), std::sin(r)) / axis_scale_;
}

Norm make_norm(std::string_view family_tag, const NormParams& params) {
    switch (parse_norm_family(family_tag)) {
        case NormFamily::euclidean: return Norm::euclidean();
        case NormFamily::killed_walk: return Norm::killed_walk(params.beta);
        case NormFamily::sampled: return Norm::sampled(params.table);
    }
    return Norm::euclidean();
}

std::vector<AngularSample> read_norm_table(std::istream& in) {
    std::vector<AngularSample> out;
    std::string line;
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        AngularSample s;
        if (!(row >> s.theta >> s.value)) {
            if (out.empty()) continue;  // header
            throw std::invalid_argument("malformed norm table line: " + line);
        }
        out.push_back(s);
    }
    return out;
}

double triangle_violation(const Norm& norm, int directions) {
    double worst = 0.0;
    for (int i = 0; i < directions; ++i) {
        const double ti = 2.0 * std::numbers::pi * i / directions;
        const Vec2 u{std::cos(ti), std::sin(ti)};
        for (int j = 0; j < directions; ++j) {
            const double tj = 2.0 * std::numbers::pi * (j + 0.37) / directions;
            const Vec2 v{0.7 * std::cos(tj), 0.7 * std::sin(tj)};
            worst = std::max(worst, norm(u + v) - norm(u) - norm(v));
        }
    }
    return worst;
}

}  // namespace facets
