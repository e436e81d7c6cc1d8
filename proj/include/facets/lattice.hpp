#pragma once

#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <vector>

namespace facets {

struct ModelParams {
    int N = 16;
    double beta = 3.0;
    double p_v = 0.3;
    double p_s = 0.7;
    double A = 0.0;
    double epsilon = 0.25;

    double Delta() const { return p_s - p_v; }
    double R() const { return 2.0 * (p_s * (1.0 - p_s) + p_v * (1.0 - p_v)); }
    double D() const { return R() / (Delta() * Delta()); }
    double delta() const { return A / Delta(); }

    /// Throws std::invalid_argument on a violated invariant.
    void validate() const;
};

/// Integer heights on the (2N-1)^2 interior of the box, zero outside.
/// Cell (i, j) is the unit square [i, i+1] x [j, j+1]; j grows northwards.
class HeightField {
public:
    HeightField() = default;
    explicit HeightField(int N);

    int N() const { return n_; }
    int side() const { return side_; }
    int cells() const { return side_ * side_; }
    int min_height() const { return -n_ / 2; }
    int max_height() const { return n_ / 2; }

    bool inside(int i, int j) const { return i >= 0 && j >= 0 && i < side_ && j < side_; }
    int index(int i, int j) const { return j * side_ + i; }

    /// Zero outside the interior.
    int at(int i, int j) const { return inside(i, j) ? h_[static_cast<std::size_t>(index(i, j))] : 0; }
    int operator[](int idx) const { return h_[static_cast<std::size_t>(idx)]; }
    void set(int i, int j, int value);
    void set_index(int idx, int value) { h_[static_cast<std::size_t>(idx)] = value; }
    bool in_range(int value) const { return value >= min_height() && value <= max_height(); }

    const std::vector<int>& values() const { return h_; }
    bool operator==(const HeightField& other) const = default;

private:
    int n_ = 0;
    int side_ = 0;
    std::vector<int> h_;
};

/// Sum over nearest-neighbour bonds of |h(x) - h(y)|, boundary bonds included.
std::int64_t gradient_sum(const HeightField& field);
double sos_energy(const HeightField& field, double beta);

/// alpha = sum of heights.
std::int64_t signed_volume(const HeightField& field);

/// Change of the gradient sum when cell idx moves by d.
int local_gradient_change(const HeightField& field, int idx, int d);

enum class TailMode { gaussian, exact };
std::string_view to_string(TailMode mode);
TailMode parse_tail_mode(std::string_view tag);

/// Largest box volume accepted by the exact tail.
inline constexpr double kExactTailMaxVolume = 1e6;

/// log P(Bin(n_s, p_s) + Bin(n_v, p_v) >= T).
double exact_log_tail(std::int64_t n_s, double p_s, std::int64_t n_v, double p_v, std::int64_t T);

/// Log-probability that the bulk particle excess reaches A N^2 given signed volume alpha.
double bulk_log_tail(const ModelParams& params, std::int64_t alpha, TailMode mode);

/// Row-major CSV with a `N=<n>` header; rows run from j = 0 (south) upwards.
void write_height_field(std::ostream& out, const HeightField& field);
HeightField read_height_field(std::istream& in);

}  // namespace facets
