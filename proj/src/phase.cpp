#include "facets/phase.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <limits>
#include <stdexcept>
#include <string>

namespace facets {

namespace {

constexpr double kAreaTol = 1e-12;
constexpr double kTieTol = 1e-12;

bool ties(double a, double b) { return std::abs(a - b) <= kTieTol * std::max(1.0, std::abs(b)); }

double type2_objective(double v, double w, double sigma, int l, double a) {
    return -v * a + type2_stack(l, a, w).tau + a * a / (2.0 * sigma);
}

BranchMinimum minimize_type2(double v, double w, double sigma, int l) {
    if (l == 0) return {0.0, 0.0, false};
    const double lo = l * w;
    const double hi = 4.0 * l;
    if (v <= 1.0 + lo / sigma) return {lo, type2_objective(v, w, sigma, l, lo), false};
    // v = 1/r(a) + a/sigma, the left side increases to +inf at a = 4l
    auto g = [&](double a) { return std::sqrt((4.0 - w) / (4.0 - a / l)) + a / sigma - v; };
    double a0 = lo, a1 = hi;
    while (a1 - a0 > kAreaTol) {
        const double mid = 0.5 * (a0 + a1);
        if (mid <= a0 || mid >= a1) break;
        (g(mid) < 0.0 ? a0 : a1) = mid;
    }
    const double a = 0.5 * (a0 + a1);
    return {a, type2_objective(v, w, sigma, l, a), a < hi};
}

// Type 1 in s = a - 4(l-1) in [0, c]: h(s) = -v a + 8(l-1) + 2 sqrt(c s) + a^2/(2 sigma),
// concave below s_i = (sigma sqrt(c) / 2)^(2/3), convex above.
BranchMinimum minimize_type1(double v, double w, double sigma, int l) {
    if (l < 1 || l * (4.0 - w) >= 4.0) return {};
    const double base = 4.0 * (l - 1);
    const double c = l * w - base;
    auto h = [&](double s) {
        const double a = base + s;
        return -v * a + 2.0 * base + 2.0 * std::sqrt(c * s) + a * a / (2.0 * sigma);
    };
    auto dh = [&](double s) { return -v + std::sqrt(c / s) + (base + s) / sigma; };

    BranchMinimum best{base, h(0.0), false};
    const double at_c = h(c);
    if (at_c < best.value) best = {base + c, at_c, false};

    const double s_i = std::pow(sigma * std::sqrt(c) / 2.0, 2.0 / 3.0);
    if (s_i >= c) return best;
    if (dh(s_i) >= 0.0 || dh(c) <= 0.0) return best;
    double s0 = s_i, s1 = c;
    while (s1 - s0 > kAreaTol) {
        const double mid = 0.5 * (s0 + s1);
        if (mid <= s0 || mid >= s1) break;
        (dh(mid) < 0.0 ? s0 : s1) = mid;
    }
    const double s = 0.5 * (s0 + s1);
    const double value = h(s);
    if (value < best.value) best = {base + s, value, true};
    return best;
}

// Interior type-1 minimizer only; nullopt-like result when absent.
BranchMinimum interior_type1(double v, double w, double sigma, int l) {
    const BranchMinimum m = minimize_type1(v, w, sigma, l);
    if (!m.interior) return {};
    return m;
}

VPSolution make_solution(double v, double sigma, Stack stack) {
    VPSolution out;
    out.v = v;
    out.total_energy = stack.kind == StackKind::empty ? 0.0 : -v * stack.area + stack_energy(stack, sigma);
    out.stack = std::move(stack);
    return out;
}

Stack build_stack(int layers, StackKind kind, double area, double w) {
    switch (kind) {
        case StackKind::empty: return empty_stack();
        case StackKind::type1: return type1_stack(layers, area, w);
        case StackKind::type2: return type2_stack(layers, area, w);
    }
    return empty_stack();
}

double m2(double v, double w, double sigma, int l) { return minimize_type2(v, w, sigma, l).value; }

template <class F>
double bisect_increasing(F&& f, double lo, double hi, double tol) {
    for (int it = 0; it < 400 && hi - lo > tol * std::max(1.0, std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (f(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

RescaledProblem make_problem(double w, double sigma, int l_max) {
    if (!(w > 0.0 && w < 4.0)) throw std::invalid_argument("Wulff area w must lie in (0, 4)");
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("sigma must be positive");
    if (l_max < 1) throw std::invalid_argument("l_max must be at least 1");
    RescaledProblem p{w, sigma, l_max, false};
    const double l_star = degenerate_layer_count(w);
    const double nearest = std::round(l_star);
    if (nearest >= 1.0 && nearest <= l_max && std::abs(l_star - nearest) < 1e-9) {
        p.w = w + 1e-7;
        p.perturbed = true;
        static std::atomic<bool> warned{false};
        if (!warned.exchange(true))
            std::cerr << std::setprecision(17) << "warning: 4/(4-w) = " << l_star << " is an integer; using w = " << p.w
                      << "\n";
    }
    return p;
}

BranchMinimum minimize_over_branch(double v, double w, double sigma, int layers, StackKind kind) {
    switch (kind) {
        case StackKind::empty: return {0.0, 0.0, false};
        case StackKind::type2: return minimize_type2(v, w, sigma, layers);
        case StackKind::type1: return minimize_type1(v, w, sigma, layers);
    }
    return {};
}

VPSolution solve_vp_v(double v, const RescaledProblem& problem) {
    const double w = problem.w;
    const double sigma = problem.sigma;
    int best_l = 0;
    StackKind best_kind = StackKind::empty;
    double best_a = 0.0;
    double best_value = 0.0;
    auto consider = [&](int l, StackKind kind, const BranchMinimum& m) {
        if (!(m.value < kInfiniteEnergy)) return;
        if (m.value < best_value && !ties(m.value, best_value)) {
            best_l = l;
            best_kind = kind;
            best_a = m.area;
            best_value = m.value;
        }
    };
    for (int l = 1; l <= problem.l_max; ++l) {
        consider(l, StackKind::type2, minimize_type2(v, w, sigma, l));
        if (l * (4.0 - w) < 4.0) consider(l, StackKind::type1, interior_type1(v, w, sigma, l));
    }
    const double beyond = m2(v, w, sigma, problem.l_max + 1);
    if (beyond < best_value && !ties(beyond, best_value)) {
        throw std::runtime_error("optimal stack at v = " + std::to_string(v) + " needs more than l_max = " +
                                 std::to_string(problem.l_max) + " layers; raise l_max");
    }
    return make_solution(v, sigma, build_stack(best_l, best_kind, best_a, w));
}

double critical_slope_type2(int layers, double w, double sigma) {
    if (layers < 1) throw std::invalid_argument("critical slopes start at l = 1");
    auto gap = [&](double v) { return m2(v, w, sigma, layers - 1) - m2(v, w, sigma, layers); };
    double hi = 1.0 + layers * w / sigma + 8.0;
    while (gap(hi) <= 0.0) hi *= 2.0;
    const double v = bisect_increasing(gap, 0.0, hi, 1e-15);
    if (std::abs(gap(v)) > 1e-7 * std::max(1.0, std::abs(m2(v, w, sigma, layers)))) {
        throw std::logic_error("coexistence check failed at l = " + std::to_string(layers));
    }
    return v;
}

std::vector<double> critical_slopes_type2(const RescaledProblem& problem) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(problem.l_max));
    for (int l = 1; l <= problem.l_max; ++l) out.push_back(critical_slope_type2(l, problem.w, problem.sigma));
    return out;
}

bool sticks_out(int layers, double w, double sigma) {
    if (layers < 1 || layers >= degenerate_layer_count(w)) {
        throw std::invalid_argument("sticks_out needs 1 <= l < 4/(4-w), got l = " + std::to_string(layers));
    }
    return critical_slope_type2(layers, w, sigma) < 1.0 + layers * w / sigma;
}

int k_star(const RescaledProblem& problem) {
    if (problem.w <= 2.0 * problem.sigma) return 0;
    int k = 0;
    const double l_star = degenerate_layer_count(problem.w);
    for (int l = 1; l <= problem.l_max && l < l_star; ++l) {
        if (sticks_out(l, problem.w, problem.sigma)) k = l;
    }
    return k;
}

double tilde_slope(int layers, double w, double sigma) {
    const double v_star = critical_slope_type2(layers, w, sigma);
    auto beats = [&](double v) {
        const BranchMinimum t1 = interior_type1(v, w, sigma, layers);
        return t1.interior && t1.value < m2(v, w, sigma, layers - 1);
    };
    if (!beats(v_star)) throw std::invalid_argument("type-1 branch does not stick out at l = " + std::to_string(layers));
    double lo = 0.0, hi = v_star;
    for (int it = 0; it < 400 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (beats(mid) ? hi : lo) = mid;
    }
    return hi;
}

double PhaseDiagram::transition_slope(int layers) const {
    if (layers < 1 || layers > static_cast<int>(critical_slopes.size())) {
        throw std::out_of_range("no transition slope for l = " + std::to_string(layers));
    }
    return layers <= k_star ? tilde_slopes[static_cast<std::size_t>(layers - 1)]
                            : critical_slopes[static_cast<std::size_t>(layers - 1)];
}

std::vector<double> PhaseDiagram::transition_slopes() const {
    std::vector<double> out;
    for (int l = 1; l <= static_cast<int>(critical_slopes.size()); ++l) out.push_back(transition_slope(l));
    return out;
}

VPSolution PhaseDiagram::branch(double v) const {
    const double w = problem.w;
    const double sigma = problem.sigma;
    int l = 0;
    while (l < static_cast<int>(critical_slopes.size()) && transition_slope(l + 1) < v) ++l;
    if (l == problem.l_max && v > critical_slope_type2(l + 1, w, sigma)) {
        throw std::runtime_error("slope " + std::to_string(v) + " is beyond the l_max ladder");
    }
    if (l == 0) return make_solution(v, sigma, empty_stack());
    if (l <= k_star && v < 1.0 + l * w / sigma) {
        const BranchMinimum t1 = interior_type1(v, w, sigma, l);
        if (t1.interior) return make_solution(v, sigma, type1_stack(l, t1.area, w));
    }
    const BranchMinimum t2 = minimize_type2(v, w, sigma, l);
    return make_solution(v, sigma, type2_stack(l, t2.area, w));
}

PhaseDiagram full_phase_diagram(const RescaledProblem& problem) {
    PhaseDiagram d;
    d.problem = problem;
    const double w = problem.w;
    const double sigma = problem.sigma;
    d.l_star = degenerate_layer_count(w);
    d.critical_slopes = critical_slopes_type2(problem);
    d.k_star = k_star(problem);
    for (int l = 1; l <= d.k_star; ++l) {
        const double vt = tilde_slope(l, w, sigma);
        d.tilde_slopes.push_back(vt);
        d.a_tilde_minus.push_back(interior_type1(vt, w, sigma, l).area);
    }
    const double v_next = critical_slope_type2(problem.l_max + 1, w, sigma);
    for (int l = 1; l <= problem.l_max; ++l) {
        const auto i = static_cast<std::size_t>(l - 1);
        const double v_exit = l < problem.l_max ? d.critical_slopes[i + 1] : v_next;
        d.a_minus.push_back(minimize_type2(d.critical_slopes[i], w, sigma, l).area);
        d.a_plus.push_back(minimize_type2(v_exit, w, sigma, l).area);
        d.entry_area.push_back(l <= d.k_star ? d.a_tilde_minus[i] : d.a_minus.back());
        const double t_exit = l + 1 <= d.k_star ? d.tilde_slopes[i + 1] : v_exit;
        d.exit_area.push_back(minimize_type2(t_exit, w, sigma, l).area);
    }
    return d;
}

VPSolution solve_vp_delta(double delta, double D, double w, double tau_e, int l_max) {
    if (!(delta >= 0.0)) throw std::invalid_argument("delta must be nonnegative");
    if (!(D > 0.0)) throw std::invalid_argument("D must be positive");
    if (!(tau_e > 0.0)) throw std::invalid_argument("tau_e must be positive");
    const RescaledProblem problem = make_problem(w, D * tau_e, l_max);
    VPSolution sol = solve_vp_v(delta / (tau_e * D), problem);
    const double a = sol.stack.area;
    sol.delta = delta;
    sol.total_energy = (delta - a) * (delta - a) / (2.0 * D) + tau_e * sol.stack.tau;
    return sol;
}

VPSolution solve_vp_delta(double delta, double D, const WulffGeometry& geometry, int l_max) {
    return solve_vp_delta(delta, D, geometry.w, geometry.norm.axis_scale(), l_max);
}

std::vector<double> a_thresholds_to_A(const PhaseDiagram& diagram, double Delta, double D, double tau_e) {
    std::vector<double> out;
    for (const double t : diagram.transition_slopes()) out.push_back(Delta * tau_e * D * t);
    return out;
}

namespace {

struct Candidate {
    double value = 0.0;
    int layers = 0;
    StackKind kind = StackKind::empty;
    double area = 0.0;
};

int kind_rank(StackKind k) { return k == StackKind::type1 ? 1 : 0; }

bool better(const Candidate& x, const Candidate& y) {
    if (x.value != y.value) return x.value < y.value;
    if (x.layers != y.layers) return x.layers < y.layers;
    if (x.kind != y.kind) return kind_rank(x.kind) < kind_rank(y.kind);
    return x.area < y.area;
}

// Type-1 tension assembled from its layers; the common radius is found by bisection on the area.
double oracle_type1_tau(int l, double a, double w) {
    auto area_of = [&](double r) { return (l - 1) * (4.0 - (4.0 - w) * r * r) + w * r * r; };
    double r0 = 0.0, r1 = 1.0;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (r0 + r1);
        (area_of(mid) < a ? r0 : r1) = mid;
    }
    const double r = 0.5 * (r0 + r1);
    return (l - 1) * optimal_shape_value(w, 4.0 - (4.0 - w) * r * r).tau + optimal_shape_value(w, w * r * r).tau;
}

void scan_point(double v, double w, double sigma, int l_max, double a, Candidate& best) {
    const double bulk = -v * a + a * a / (2.0 * sigma);
    const double l_star = degenerate_layer_count(w);
    const int l_lo = std::max(1, static_cast<int>(std::ceil(a / 4.0 - 1e-12)));
    const int l_hi = std::min(l_max, static_cast<int>(std::floor(a / w + 1e-12)) + 1);
    for (int l = l_lo; l <= l_hi; ++l) {
        if (a >= l * w && a <= 4.0 * l) {
            const Candidate c{bulk + l * optimal_shape_value(w, a / l).tau, l, StackKind::type2, a};
            if (better(c, best)) best = c;
        }
        if (l < l_star && a >= 4.0 * (l - 1) && a <= l * w) {
            const Candidate c{bulk + oracle_type1_tau(l, a, w), l, StackKind::type1, a};
            if (better(c, best)) best = c;
        }
    }
}

OracleResult to_result(const Candidate& c) { return {c.layers, c.kind, c.area, c.value}; }

void check_oracle_args(double grid_step, int l_max) {
    if (!(grid_step > 0.0 && grid_step <= 1e-3)) throw std::invalid_argument("oracle grid step must lie in (0, 1e-3]");
    if (l_max < 1) throw std::invalid_argument("l_max must be at least 1");
}

}  // namespace

OracleResult brute_force_oracle_serial(double v, double w, double sigma, int l_max, double grid_step) {
    check_oracle_args(grid_step, l_max);
    const long count = static_cast<long>(std::floor(4.0 * l_max / grid_step));
    Candidate best;
    for (long k = 1; k <= count; ++k) scan_point(v, w, sigma, l_max, k * grid_step, best);
    return to_result(best);
}

OracleResult brute_force_oracle(double v, double w, double sigma, int l_max, double grid_step) {
    check_oracle_args(grid_step, l_max);
    const long count = static_cast<long>(std::floor(4.0 * l_max / grid_step));
    Candidate best;
#pragma omp parallel
    {
        Candidate local;
#pragma omp for schedule(static)
        for (long k = 1; k <= count; ++k) scan_point(v, w, sigma, l_max, k * grid_step, local);
#pragma omp critical
        if (better(local, best)) best = local;
    }
    return to_result(best);
}

}  // namespace facets
