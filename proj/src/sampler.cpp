#include "facets/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace facets {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

std::vector<int> square_region(int side, int s, int x0, int y0) {
    std::vector<int> cells;
    cells.reserve(static_cast<std::size_t>(s) * s);
    for (int j = y0; j < y0 + s; ++j) {
        for (int i = x0; i < x0 + s; ++i) cells.push_back(j * side + i);
    }
    return cells;
}

double square_probability(int side, int s) {
    if (s <= 0) return 0.0;
    const double positions = static_cast<double>(side - s + 1) * (side - s + 1);
    return 1.0 / (side * positions);
}

bool accept(Rng& rng, double log_ratio) {
    if (log_ratio >= 0.0) return true;
    if (log_ratio == kNegInf) return false;
    return uniform01(rng) < std::exp(log_ratio);
}

}  // namespace

Rng make_chain_rng(std::uint64_t seed, std::uint64_t chain_index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(chain_index), static_cast<std::uint32_t>(chain_index >> 32), 0x5eedu};
    return Rng(seq);
}

void ChainConfig::validate() const {
    params.validate();
    if (!(sweeps > burn_in && burn_in >= 0)) throw std::invalid_argument("need sweeps > burn_in >= 0");
    if (thinning < 1) throw std::invalid_argument("thinning must be >= 1");
    if (!(proposal_mix >= 0.0 && proposal_mix <= 1.0)) throw std::invalid_argument("proposal_mix must lie in [0, 1]");
    if (snapshot_every < 0) throw std::invalid_argument("snapshot_every must be >= 0");
    if (ramp_sweeps < 0 || ramp_sweeps > burn_in) throw std::invalid_argument("need 0 <= ramp_sweeps <= burn_in");
    if (std::abs(initial_height) > params.N / 2) throw std::invalid_argument("initial_height outside the height range");
}

double log_target(const HeightField& field, const ModelParams& params, TailMode mode) {
    return -sos_energy(field, params.beta) + bulk_log_tail(params, signed_volume(field), mode);
}

int square_side(const std::vector<int>& region, int side) {
    if (region.empty()) return 0;
    int x0 = side, y0 = side, x1 = -1, y1 = -1;
    for (const int c : region) {
        x0 = std::min(x0, c % side);
        x1 = std::max(x1, c % side);
        y0 = std::min(y0, c / side);
        y1 = std::max(y1, c / side);
    }
    const int s = x1 - x0 + 1;
    if (y1 - y0 + 1 != s || static_cast<std::size_t>(s) * s != region.size()) return 0;
    return s;
}

double monolayer_proposal_probability(const HeightField& field, const ContourSet& contours, const std::vector<int>& region, int) {
    const int side = field.side();
    const double sq = square_probability(side, square_side(region, side));
    double qc = sq;
    const std::size_t n = contours.contours.size();
    if (n > 0) {
        std::size_t m = 0;
        for (const auto& c : contours.contours) {
            if (c.area != static_cast<std::int64_t>(region.size())) continue;
            if (c.interior(side) == region) ++m;
        }
        qc = static_cast<double>(m) / static_cast<double>(n);
    }
    return 0.25 * qc + 0.25 * sq;
}

Chain::Chain(const ModelParams& params, TailMode mode) : Chain(params, mode, HeightField(params.N)) {}

Chain::Chain(const ModelParams& params, TailMode mode, HeightField initial)
    : params_(params), mode_(mode), field_(std::move(initial)) {
    params_.validate();
    if (field_.N() != params_.N) throw std::invalid_argument("initial field size does not match N");
    gradient_ = gradient_sum(field_);
    alpha_ = signed_volume(field_);
    stamp_.assign(static_cast<std::size_t>(field_.cells()), 0);
    const int L = field_.side();
    pad_stride_ = L + 2;
    pad_.assign(static_cast<std::size_t>(pad_stride_) * pad_stride_, 0);
    pad_index_.resize(static_cast<std::size_t>(field_.cells()));
    for (int idx = 0; idx < field_.cells(); ++idx) {
        const int p = (idx / L + 1) * pad_stride_ + idx % L + 1;
        pad_index_[static_cast<std::size_t>(idx)] = p;
        pad_[static_cast<std::size_t>(p)] = field_[idx];
    }
    for (int k = 0; k < 5; ++k) bond_ratio_[k] = std::exp(-params_.beta * (2 * k - 4));
    refresh_tail();
}

void Chain::refresh_tail() {
    const double now = tail(alpha_);
    for (const int d : {-1, 1}) {
        const std::int64_t reach = static_cast<std::int64_t>(field_.cells()) * field_.max_height();
        if (std::abs(alpha_ + d) > reach) {
            tail_ratio_[d > 0] = 0.0;
            continue;
        }
        const double next = tail(alpha_ + d);
        const double r = std::exp(next - now);
        tail_ratio_[d > 0] = std::isnan(r) ? 1.0 : r;
    }
}

double Chain::tail(std::int64_t alpha) const {
    if (mode_ == TailMode::gaussian) return bulk_log_tail(params_, alpha, mode_);
    auto it = tail_cache_.find(alpha);
    if (it != tail_cache_.end()) return it->second;
    const double value = bulk_log_tail(params_, alpha, mode_);
    tail_cache_.emplace(alpha, value);
    return value;
}

void Chain::set_A(double A) {
    params_.A = A;
    params_.validate();
    tail_cache_.clear();
    refresh_tail();
}

bool Chain::metropolis_step(Rng& rng) {
    // one draw covers site, direction and a 31-bit acceptance stage
    const auto cells = static_cast<std::uint32_t>(field_.cells());
    std::uint64_t r = rng();
    std::uint64_t m = (r & 0xffffffffu) * cells;
    if (static_cast<std::uint32_t>(m) < cells) {
        const std::uint32_t floor = static_cast<std::uint32_t>(-cells) % cells;
        while (static_cast<std::uint32_t>(m) < floor) {
            r = rng();
            m = (r & 0xffffffffu) * cells;
        }
    }
    const int idx = static_cast<int>(m >> 32);
    const int d = (r >> 32) & 1u ? 1 : -1;
    const std::uint64_t k = r >> 33;
    const int p = pad_index_[static_cast<std::size_t>(idx)];
    const int* v = pad_.data() + p;
    const int h = *v;
    if (!field_.in_range(h + d)) return false;
    const int P = pad_stride_;
    const int dg = std::abs(h + d - v[-1]) - std::abs(h - v[-1]) + std::abs(h + d - v[1]) - std::abs(h - v[1]) +
                   std::abs(h + d - v[-P]) - std::abs(h - v[-P]) + std::abs(h + d - v[P]) - std::abs(h - v[P]);
    const double ratio = bond_ratio_[(dg + 4) / 2] * tail_ratio_[d > 0];
    if (ratio < 1.0) {
        // u = (k + u') / 2^31 with u' drawn only when ratio falls inside cell k
        const double t = ratio * 0x1.0p31;
        if (static_cast<double>(k) >= t) return false;
        if (static_cast<double>(k + 1) > t && static_cast<double>(rng() >> 11) * 0x1.0p-53 >= t - static_cast<double>(k)) {
            return false;
        }
    }
    field_.set_index(idx, h + d);
    pad_[static_cast<std::size_t>(p)] = h + d;
    gradient_ += dg;
    alpha_ += d;
    refresh_tail();
    return true;
}

int Chain::region_gradient_change(const std::vector<int>& region, int d) {
    if (++generation_ == 0) {
        std::fill(stamp_.begin(), stamp_.end(), 0);
        generation_ = 1;
    }
    for (const int c : region) stamp_[static_cast<std::size_t>(c)] = generation_;
    const int L = field_.side();
    int change = 0;
    for (const int c : region) {
        const int i = c % L, j = c / L;
        const int h = field_[c];
        const int nb[4][2] = {{i - 1, j}, {i + 1, j}, {i, j - 1}, {i, j + 1}};
        for (const auto& q : nb) {
            if (field_.inside(q[0], q[1]) && stamp_[static_cast<std::size_t>(field_.index(q[0], q[1]))] == generation_) continue;
            const int hn = field_.at(q[0], q[1]);
            change += std::abs(h + d - hn) - std::abs(h - hn);
        }
    }
    return change;
}

void Chain::apply(const std::vector<int>& region, int d, int gradient_change) {
    for (const int c : region) {
        field_.set_index(c, field_[c] + d);
        pad_[static_cast<std::size_t>(pad_index_[static_cast<std::size_t>(c)])] += d;
    }
    gradient_ += gradient_change;
    alpha_ += d * static_cast<std::int64_t>(region.size());
    refresh_tail();
}

double Chain::monolayer_log_ratio(const std::vector<int>& region, int d) {
    for (const int c : region) {
        if (!field_.in_range(field_[c] + d)) return kNegInf;
    }
    return monolayer_log_ratio(region, d, extract_contours(field_));
}

double Chain::monolayer_log_ratio(const std::vector<int>& region, int d, const ContourSet& before) {
    for (const int c : region) {
        if (!field_.in_range(field_[c] + d)) return kNegInf;
    }
    const double q_fwd = monolayer_proposal_probability(field_, before, region, d);
    if (q_fwd <= 0.0) return kNegInf;
    const int dg = region_gradient_change(region, d);
    const std::int64_t da = d * static_cast<std::int64_t>(region.size());
    const double log_pi = -params_.beta * dg + tail(alpha_ + da) - tail(alpha_);
    apply(region, d, dg);
    const ContourSet after = extract_contours(field_);
    const double q_rev = monolayer_proposal_probability(field_, after, region, -d);
    apply(region, -d, -dg);
    if (q_rev <= 0.0) return kNegInf;
    return log_pi + std::log(q_rev) - std::log(q_fwd);
}

bool Chain::monolayer_step(Rng& rng) {
    const int L = field_.side();
    const bool contour_channel = uniform_int(rng, 0, 1) == 0;
    const int d = uniform_int(rng, 0, 1) ? 1 : -1;
    std::vector<int> region;
    const ContourSet contours = extract_contours(field_);
    if (contour_channel) {
        if (!contours.contours.empty()) {
            const int k = uniform_int(rng, 0, static_cast<int>(contours.contours.size()) - 1);
            region = contours.contours[static_cast<std::size_t>(k)].interior(L);
        }
    }
    if (region.empty()) {
        const int s = uniform_int(rng, 1, L);
        const int x0 = uniform_int(rng, 0, L - s);
        const int y0 = uniform_int(rng, 0, L - s);
        region = square_region(L, s, x0, y0);
    }
    const double log_ratio = monolayer_log_ratio(region, d, contours);
    if (!accept(rng, log_ratio)) return false;
    apply(region, d, region_gradient_change(region, d));
    return true;
}

bool Chain::step(Rng& rng, double mix) {
    if (mix > 0.0 && uniform01(rng) < mix) return monolayer_step(rng);
    return metropolis_step(rng);
}

void Chain::sweep(Rng& rng, double mix) {
    const int n = field_.cells();
    for (int k = 0; k < n; ++k) metropolis_step(rng);
    if (mix > 0.0 && uniform01(rng) < mix) monolayer_step(rng);
}

bool Chain::bookkeeping_consistent() const {
    return gradient_sum(field_) == gradient_ && signed_volume(field_) == alpha_;
}

std::vector<Transition> kernel_row(const HeightField& from, const ModelParams& params, TailMode mode, double mix) {
    Chain chain(params, mode, from);
    std::map<std::vector<int>, double> row;
    const int cells = from.cells();
    auto add = [&](const std::vector<int>& region, int d, double p) {
        if (p <= 0.0) return;
        std::vector<int> key = from.values();
        for (const int c : region) key[static_cast<std::size_t>(c)] += d;
        row[key] += p;
    };
    for (int idx = 0; idx < cells; ++idx) {
        for (const int d : {-1, 1}) {
            const std::vector<int> region{idx};
            if (!from.in_range(from[idx] + d)) continue;
            const int dg = local_gradient_change(from, idx, d);
            const double lr = -params.beta * dg + chain.tail(chain.alpha() + d) - chain.tail(chain.alpha());
            add(region, d, (1.0 - mix) / (2.0 * cells) * std::min(1.0, std::exp(lr)));
        }
    }
    if (mix > 0.0) {
        const int L = from.side();
        const ContourSet contours = extract_contours(from);
        std::vector<std::vector<int>> regions;
        for (const auto& c : contours.contours) regions.push_back(c.interior(L));
        for (int s = 1; s <= L; ++s) {
            for (int y0 = 0; y0 + s <= L; ++y0) {
                for (int x0 = 0; x0 + s <= L; ++x0) regions.push_back(square_region(L, s, x0, y0));
            }
        }
        std::sort(regions.begin(), regions.end());
        regions.erase(std::unique(regions.begin(), regions.end()), regions.end());
        for (const auto& region : regions) {
            for (const int d : {-1, 1}) {
                const double q = monolayer_proposal_probability(from, contours, region, d);
                const double lr = chain.monolayer_log_ratio(region, d);
                if (lr == kNegInf) continue;
                add(region, d, mix * q * std::min(1.0, std::exp(lr)));
            }
        }
    }
    std::vector<Transition> out;
    out.reserve(row.size());
    for (const auto& [key, p] : row) {
        HeightField to(from.N());
        for (int idx = 0; idx < cells; ++idx) to.set_index(idx, key[static_cast<std::size_t>(idx)]);
        out.push_back({std::move(to), p});
    }
    return out;
}

int count_large(const HeightField& field, double epsilon) {
    ContourSet set = extract_contours(field);
    classify(set, epsilon);
    return set.count(ContourClass::large);
}

std::vector<SampleRecord> run_chain(const ChainConfig& config, std::uint64_t chain_index, const SnapshotSink& sink) {
    config.validate();
    HeightField start(config.params.N);
    for (int idx = 0; idx < start.cells(); ++idx) start.set_index(idx, config.initial_height);
    Chain chain(config.params, config.tail_mode, std::move(start));
    Rng rng = make_chain_rng(config.seed, chain_index);
    std::vector<SampleRecord> records;
    for (long sweep = 1; sweep <= config.sweeps; ++sweep) {
        if (sweep <= config.ramp_sweeps) chain.set_A(config.params.A * static_cast<double>(sweep) / static_cast<double>(config.ramp_sweeps));
        chain.sweep(rng, config.proposal_mix);
        const bool snap = config.snapshot_every > 0 && sweep % config.snapshot_every == 0;
        if (snap && sink) sink(sweep, chain.field());
        if (sweep <= config.burn_in || (sweep - config.burn_in) % config.thinning != 0) continue;
        if (!chain.bookkeeping_consistent()) throw std::logic_error("incremental energy bookkeeping drifted");
        SampleRecord r;
        r.sweep = sweep;
        r.alpha = chain.alpha();
        r.energy = chain.energy();
        r.n_large = count_large(chain.field(), config.params.epsilon);
        if (snap && !sink) r.snapshot = chain.field();
        records.push_back(std::move(r));
    }
    return records;
}

double integrated_autocorrelation_time(const std::vector<double>& x) {
    const std::size_t n = x.size();
    if (n < 4) return 1.0;
    double mean = 0.0;
    for (const double v : x) mean += v;
    mean /= static_cast<double>(n);
    auto cov = [&](std::size_t lag) {
        double s = 0.0;
        for (std::size_t t = 0; t + lag < n; ++t) s += (x[t] - mean) * (x[t + lag] - mean);
        return s / static_cast<double>(n);
    };
    const double c0 = cov(0);
    if (!(c0 > 0.0)) return 1.0;
    double tau = 1.0;
    for (std::size_t lag = 1; lag < n; ++lag) {
        tau += 2.0 * cov(lag) / c0;
        if (static_cast<double>(lag) >= 5.0 * tau) break;
    }
    return std::max(tau, 1.0);
}

}  // namespace facets
