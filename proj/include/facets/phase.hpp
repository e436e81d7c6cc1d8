#pragma once

#include <vector>

#include "facets/stack.hpp"
#include "facets/wulff.hpp"

namespace facets {

inline constexpr int kDefaultMaxLayers = 12;

/// The rescaled problem min_stacks { -v a + tau + a^2 / (2 sigma) }.
struct RescaledProblem {
    double w = 0.0;
    double sigma = 1.0;
    int l_max = kDefaultMaxLayers;
    bool perturbed = false;  // w was nudged off a degenerate value
};

/// Validates and applies the degeneracy guard: if 4/(4-w) is within 1e-9 of an
/// integer <= l_max, w is shifted by 1e-7 and a warning goes to stderr.
RescaledProblem make_problem(double w, double sigma, int l_max = kDefaultMaxLayers);

struct BranchMinimum {
    double area = 0.0;
    double value = kInfiniteEnergy;
    bool interior = false;  // minimizer strictly inside the branch range
};

/// Minimizes -v a + G(a) over one (layers, kind) branch. For type 1 the minimum
/// over the closed range is returned and `interior` marks a strictly interior one.
BranchMinimum minimize_over_branch(double v, double w, double sigma, int layers, StackKind kind);

struct VPSolution {
    Stack stack;
    double total_energy = 0.0;
    double v = 0.0;
    double delta = 0.0;  // only meaningful for solve_vp_delta
};

/// Throws std::runtime_error when l_max + 1 layers would do strictly better.
VPSolution solve_vp_v(double v, const RescaledProblem& problem);

/// Coexistence slope between the type-2 branches l-1 and l.
double critical_slope_type2(int layers, double w, double sigma);
std::vector<double> critical_slopes_type2(const RescaledProblem& problem);

/// Throws std::invalid_argument for l >= 4/(4-w).
bool sticks_out(int layers, double w, double sigma);

int k_star(const RescaledProblem& problem);

/// Slope where the interior type-1 branch with `layers` layers first beats the
/// type-2 branch with layers - 1. Requires sticks_out(layers).
double tilde_slope(int layers, double w, double sigma);

struct PhaseDiagram {
    RescaledProblem problem;
    double l_star = 0.0;
    int k_star = 0;
    std::vector<double> critical_slopes;  // v*_l, l = 1..l_max
    std::vector<double> tilde_slopes;     // tilde v*_l, l = 1..k_star
    std::vector<double> a_minus;          // a_l(v*_l), type-2 ladder
    std::vector<double> a_plus;           // a_l(v*_{l+1}), type-2 ladder
    std::vector<double> a_tilde_minus;    // type-1 area at tilde v*_l
    std::vector<double> entry_area;       // area of the l-layer phase at its entry slope
    std::vector<double> exit_area;        // area of the l-layer phase at the next transition

    /// v*_l or tilde v*_l (l <= k*): slope where the optimal layer count becomes l.
    double transition_slope(int layers) const;
    std::vector<double> transition_slopes() const;

    /// Optimal stack at slope v read off the assembled thresholds.
    VPSolution branch(double v) const;
};

PhaseDiagram full_phase_diagram(const RescaledProblem& problem);

/// Solves the problem in original units: v = delta / (tau_e D), sigma = D tau_e,
/// energy (delta - a)^2 / (2 D) + tau_e tau.
VPSolution solve_vp_delta(double delta, double D, double w, double tau_e, int l_max = kDefaultMaxLayers);
VPSolution solve_vp_delta(double delta, double D, const WulffGeometry& geometry, int l_max = kDefaultMaxLayers);

/// A_l = Delta tau_e D * transition slope l.
std::vector<double> a_thresholds_to_A(const PhaseDiagram& diagram, double Delta, double D, double tau_e);

struct OracleResult {
    int layers = 0;
    StackKind kind = StackKind::empty;
    double area = 0.0;
    double value = 0.0;
};

/// Exhaustive grid scan of both stack types; tensions are rebuilt layer by layer
/// from optimal shapes, not from the closed stack formulas.
OracleResult brute_force_oracle(double v, double w, double sigma, int l_max, double grid_step);
OracleResult brute_force_oracle_serial(double v, double w, double sigma, int l_max, double grid_step);

}  // namespace facets
