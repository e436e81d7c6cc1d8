#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <unordered_map>
#include <vector>

#include "facets/contours.hpp"
#include "facets/lattice.hpp"

namespace facets {

using Rng = std::mt19937_64;

/// Independent stream per (seed, chain index).
Rng make_chain_rng(std::uint64_t seed, std::uint64_t chain_index);

struct ChainConfig {
    ModelParams params;
    long sweeps = 1000;
    long burn_in = 100;
    long thinning = 10;
    std::uint64_t seed = 1;
    TailMode tail_mode = TailMode::gaussian;
    double proposal_mix = 0.2;
    long snapshot_every = 0;  // 0: no snapshots
    int initial_height = 0;   // chains start from this uniform field
    long ramp_sweeps = 0;     // A rises linearly from 0 over these burn-in sweeps

    void validate() const;
};

struct SampleRecord {
    long sweep = 0;
    std::int64_t alpha = 0;
    double energy = 0.0;
    int n_large = 0;
    std::optional<HeightField> snapshot;
};

/// Log of the unnormalized target: -beta * gradient_sum + bulk_log_tail(alpha).
double log_target(const HeightField& field, const ModelParams& params, TailMode mode);

/// Probability that one monolayer proposal from `field` moves the cells of `region`
/// (sorted cell indices) by d. Mixes the contour channel (uniform level line, or a
/// seeded square when there is none) and the seeded-square channel with weight 1/2.
double monolayer_proposal_probability(const HeightField& field, const ContourSet& contours, const std::vector<int>& region, int d);

/// Side length when the region is a full square, 0 otherwise.
int square_side(const std::vector<int>& region, int side);

class Chain {
public:
    Chain(const ModelParams& params, TailMode mode);
    Chain(const ModelParams& params, TailMode mode, HeightField initial);

    const HeightField& field() const { return field_; }
    const ModelParams& params() const { return params_; }
    TailMode tail_mode() const { return mode_; }
    std::int64_t gradient() const { return gradient_; }
    std::int64_t alpha() const { return alpha_; }
    double energy() const { return params_.beta * static_cast<double>(gradient_); }
    double log_weight() const { return -energy() + tail(alpha_); }

    /// h(x) -> h(x) +- 1 at a uniform site.
    bool metropolis_step(Rng& rng);
    /// Shift of a level-line interior or of a seeded square.
    bool monolayer_step(Rng& rng);
    /// Monolayer move with probability mix, single-site otherwise.
    bool step(Rng& rng, double mix);
    /// |interior| single-site attempts, then one monolayer attempt with probability mix.
    void sweep(Rng& rng, double mix);

    /// Log acceptance ratio (before the min with 0) of shifting `region` by d;
    /// -inf when the move leaves the height range.
    double monolayer_log_ratio(const std::vector<int>& region, int d);

    /// Incremental totals agree with a full recomputation.
    bool bookkeeping_consistent() const;

    double tail(std::int64_t alpha) const;

    /// Changes the field strength A in place.
    void set_A(double A);

private:
    void apply(const std::vector<int>& region, int d, int gradient_change);
    void refresh_tail();
    double monolayer_log_ratio(const std::vector<int>& region, int d, const ContourSet& before);
    int region_gradient_change(const std::vector<int>& region, int d);

    ModelParams params_;
    TailMode mode_;
    HeightField field_;
    std::int64_t gradient_ = 0;
    std::int64_t alpha_ = 0;
    mutable std::unordered_map<std::int64_t, double> tail_cache_;
    double bond_ratio_[5] = {};  // exp(-beta * dg) for dg = -4, -2, 0, 2, 4
    double tail_ratio_[2] = {};  // exp(tail(alpha -+ 1) - tail(alpha))
    std::vector<int> pad_;       // zero-bordered mirror of field_
    std::vector<int> pad_index_;  // cell index -> pad_ index
    int pad_stride_ = 0;
    std::vector<unsigned> stamp_;
    unsigned generation_ = 0;
};

struct Transition {
    HeightField to;
    double probability = 0.0;
};

/// Off-diagonal row of the kernel applied by Chain::step(rng, mix), assembled by
/// enumerating every proposal. Intended for tiny boxes.
std::vector<Transition> kernel_row(const HeightField& from, const ModelParams& params, TailMode mode, double mix);

using SnapshotSink = std::function<void(long sweep, const HeightField&)>;

/// Deterministic given (config, chain_index).
std::vector<SampleRecord> run_chain(const ChainConfig& config, std::uint64_t chain_index = 0, const SnapshotSink& sink = {});

/// Integrated autocorrelation time of a series (Sokal window, c = 5), in units of
/// the series spacing. Returns 1 for constant or too-short series.
double integrated_autocorrelation_time(const std::vector<double>& series);

/// Number of large level lines of a field.
int count_large(const HeightField& field, double epsilon);

}  // namespace facets
