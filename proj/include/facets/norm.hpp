#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "facets/geometry.hpp"

namespace facets {

enum class NormFamily { euclidean, killed_walk, sampled };

std::string_view to_string(NormFamily family);
NormFamily parse_norm_family(std::string_view tag);

struct AngularSample {
    double theta = 0.0;
    double value = 0.0;
};

struct NormParams {
    double beta = 0.0;                  // killed_walk
    std::vector<AngularSample> table;   // sampled
};

/// A planar norm with the full symmetry group of the square lattice, normalized so
/// that the axis direction has value 1. The unnormalized axis value is kept as
/// `axis_scale()` so callers can convert back to physical units.
class Norm {
public:
    static Norm euclidean();
    /// Support function of the rate region {u : 2 e^{-beta} (cosh u1 + cosh u2) <= 1}.
    static Norm killed_walk(double beta);
    /// Linear interpolation (in angle) of a table folded onto [0, pi/4].
    static Norm sampled(std::vector<AngularSample> table);

    /// Normalized value at unit direction angle theta.
    double operator()(double theta) const;
    /// Positively homogeneous extension, tau(x) = |x| tau(angle(x)).
    double operator()(Vec2 x) const;

    double axis_scale() const { return axis_scale_; }
    NormFamily family() const { return family_; }
    const NormParams& params() const { return params_; }

private:
    Norm() = default;
    /// Unnormalized value on a unit direction (c, s) with c >= s >= 0.
    double raw_fundamental(double c, double s) const;

    NormFamily family_ = NormFamily::euclidean;
    NormParams params_;
    double axis_scale_ = 1.0;
    double half_rate_ = 0.0;               // e^beta / 2 for killed_walk
    std::vector<AngularSample> folded_;    // sorted on [0, pi/4], unnormalized
};

Norm make_norm(std::string_view family_tag, const NormParams& params);

/// Reads `theta,value` lines (radians); blank lines, `#` comments and a header are skipped.
std::vector<AngularSample> read_norm_table(std::istream& in);

/// Largest violation of tau(u + v) <= tau(u) + tau(v) over a grid of direction pairs.
double triangle_violation(const Norm& norm, int directions = 96);

}  // namespace facets
