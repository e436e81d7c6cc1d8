#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "doctest.h"

#include "facets/phase.hpp"

using namespace facets;
using std::numbers::pi;

TEST_CASE("branch minimizer") {
    for (int l = 1; l <= 3; ++l) {
        const auto m = minimize_over_branch(0.0, pi, 1.0, l, StackKind::type2);
        CHECK(m.area == doctest::Approx(l * pi));
    }
    CHECK(minimize_over_branch(1.0 + pi, pi, 1.0, 1, StackKind::type2).area == doctest::Approx(pi).epsilon(1e-9));
    // root of 4.5 = sqrt((4 - pi)/(4 - a)) + a, by bracketing
    const auto m = minimize_over_branch(4.5, pi, 1.0, 1, StackKind::type2);
    CHECK(std::abs(m.area - 3.350432370895) < 1e-6);
    CHECK(m.interior);
    CHECK(m.value == doctest::Approx(fv(1, m.area, pi, 1.0, 4.5)).epsilon(1e-12));
}

TEST_CASE("solutions of the slope problem") {
    const RescaledProblem p = make_problem(pi, 1.0);
    const auto below = solve_vp_v(3.0, p);
    CHECK(below.stack.kind == StackKind::empty);
    CHECK(below.total_energy == 0.0);

    const auto one = solve_vp_v(3.6, p);
    CHECK(one.stack.layers == 1);
    const auto o = brute_force_oracle(3.6, pi, 1.0, 4, 1e-4);
    CHECK(o.layers == 1);
    CHECK(o.kind == one.stack.kind);
    CHECK(std::abs(o.area - one.stack.area) <= 1e-4);
    CHECK(one.total_energy == doctest::Approx(-3.6 * one.stack.area + stack_energy(one.stack, 1.0)).epsilon(1e-12));

    const RescaledProblem q = make_problem(3.0, 2.0);
    CHECK(q.perturbed);
    for (int k = 0; k <= 200; ++k) CHECK(solve_vp_v(0.1 * k, q).stack.kind != StackKind::type1);

    CHECK_THROWS_AS(solve_vp_v(40.0, make_problem(pi, 1.0, 2)), std::runtime_error);
}

TEST_CASE("critical slopes") {
    const auto s1 = critical_slopes_type2(make_problem(pi, 1.0));
    CHECK(s1[0] == doctest::Approx(2.0 + pi / 2).epsilon(1e-12));
    // min over [pi, 4] of G(a)/a by bounded scalar minimization
    const auto s2 = critical_slopes_type2(make_problem(pi, 2.0));
    CHECK(std::abs(s2[0] - 2.779387342714) < 1e-9);
    for (const double w : {2.5, pi, 3.5}) {
        for (const double sigma : {0.5, 1.0, 4.0}) {
            const auto s = critical_slopes_type2(make_problem(w, sigma));
            for (std::size_t i = 1; i < s.size(); ++i) CHECK(s[i] > s[i - 1]);
        }
    }
}

TEST_CASE("sticking out and k*") {
    CHECK(sticks_out(1, pi, 1.0));
    CHECK_FALSE(sticks_out(1, 3.0, 2.0));
    CHECK_THROWS_AS(sticks_out(5, pi, 1.0), std::invalid_argument);
    CHECK(k_star(make_problem(3.0, 2.0)) == 0);
    CHECK(k_star(make_problem(pi, 1.0)) >= 1);
    for (const double w : {2.2, 2.5, 3.0, pi, 3.5, 3.8}) {
        for (const double sigma : {0.1, 0.3, 0.7, 1.0, 1.5, 3.0, 7.5}) {
            const RescaledProblem p = make_problem(w, sigma);
            const int k = k_star(p);
            CHECK((k == 0) == (p.w <= 2 * sigma));
            CHECK(k < degenerate_layer_count(p.w) * (1 - sigma / 8));
        }
    }
}

TEST_CASE("phase diagram") {
    SUBCASE("no type-1 window when w <= 2 sigma") {
        const PhaseDiagram d = full_phase_diagram(make_problem(3.0, 2.0));
        CHECK(d.k_star == 0);
        CHECK(d.tilde_slopes.empty());
        CHECK(d.transition_slopes() == d.critical_slopes);
        for (int k = 0; k <= 300; ++k) CHECK(d.branch(d.critical_slopes.back() * k / 300.0).stack.kind != StackKind::type1);
    }
    SUBCASE("type-1 windows sit inside their bracket") {
        for (const auto& [w, sigma] : {std::pair{pi, 1.0}, std::pair{3.5, 0.5}, std::pair{3.8, 0.3}}) {
            const PhaseDiagram d = full_phase_diagram(make_problem(w, sigma));
            REQUIRE(d.k_star >= 1);
            for (int l = 1; l <= d.k_star; ++l) {
                const double vt = d.tilde_slopes[l - 1], vs = d.critical_slopes[l - 1];
                CHECK(1 + (l - 1) * w / sigma < vt);
                CHECK(vt < vs);
                CHECK(vs < 1 + l * w / sigma);
            }
        }
        // min over (0, pi) of (2 sqrt(pi a) + a^2 / 2) / a
        const PhaseDiagram d = full_phase_diagram(make_problem(pi, 1.0));
        CHECK(std::abs(d.tilde_slopes[0] - 3.487342054529) < 1e-9);
    }
    SUBCASE("branch evaluator agrees with the direct solve") {
        for (const auto& [w, sigma] : {std::pair{pi, 1.0}, std::pair{3.0, 2.0}, std::pair{3.5, 0.5}}) {
            const RescaledProblem p = make_problem(w, sigma);
            const PhaseDiagram d = full_phase_diagram(p);
            for (int k = 1; k < 400; ++k) {
                const double v = d.critical_slopes[5] * k / 400.0;
                const auto a = d.branch(v), b = solve_vp_v(v, p);
                CHECK(a.stack.layers == b.stack.layers);
                CHECK(a.stack.kind == b.stack.kind);
                CHECK(a.stack.area == doctest::Approx(b.stack.area).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("ladder structure") {
    for (const auto& [w, sigma] : {std::pair{pi, 1.0}, std::pair{3.0, 2.0}, std::pair{3.5, 0.5}, std::pair{2.5, 4.0}}) {
        const RescaledProblem p = make_problem(w, sigma);
        const PhaseDiagram d = full_phase_diagram(p);
        int prev = 0;
        for (int k = 0; k <= 2000; ++k) {
            const double v = d.critical_slopes[8] * k / 2000.0;
            const int l = solve_vp_v(v, p).stack.layers;
            CHECK(l - prev <= 1);
            CHECK(l >= prev);
            prev = l;
        }
        for (int l = 2; l <= 8; ++l) {
            const auto i = static_cast<std::size_t>(l - 1);
            CHECK(d.a_plus[i - 1] < d.a_minus[i]);
            CHECK(d.a_plus[i - 1] / (l - 1) > d.a_minus[i] / l);
            const double r_prev = type2_stack(l - 1, d.a_plus[i - 1], w).radius;
            const double r_next = type2_stack(l, d.a_minus[i], w).radius;
            CHECK(r_prev < r_next);
            CHECK(d.a_minus[i - 1] < d.a_plus[i - 1]);
        }
        for (int k = 1; k <= 60; ++k) {
            const double v = d.critical_slopes[6] * k / 60.0;
            for (int l = 1; l <= 6; ++l) {
                for (int m = l + 1; m <= 7; ++m) {
                    const double al = minimize_over_branch(v, w, sigma, l, StackKind::type2).area;
                    const double am = minimize_over_branch(v, w, sigma, m, StackKind::type2).area;
                    CHECK(am > al);
                    CHECK(am / m <= al / l + 1e-12);
                }
            }
        }
    }
}

TEST_CASE("original units") {
    const auto z = solve_vp_delta(0.0, 2.0, pi, 1.5);
    CHECK(z.stack.kind == StackKind::empty);
    CHECK(z.total_energy == 0.0);
    const auto s = solve_vp_delta(9.0, 0.8, pi, 1.5);
    CHECK(s.total_energy == doctest::Approx((9.0 - s.stack.area) * (9.0 - s.stack.area) / 1.6 + 1.5 * s.stack.tau).epsilon(1e-12));

    const PhaseDiagram d = full_phase_diagram(make_problem(pi, 1.0));
    const auto A = a_thresholds_to_A(d, 1.0, 1.0, 1.0);
    CHECK(A == d.transition_slopes());
    const auto A2 = a_thresholds_to_A(d, 2.0, 1.0, 1.0);
    for (std::size_t i = 0; i < A.size(); ++i) CHECK(A2[i] == doctest::Approx(2 * A[i]).epsilon(1e-15));
    CHECK(A[0] == d.tilde_slopes[0]);
    CHECK(A[0] < d.critical_slopes[0]);
}

TEST_CASE("brute-force oracle") {
    CHECK(brute_force_oracle(1e-3, pi, 1.0, 4, 1e-3).layers == 0);
    CHECK(brute_force_oracle(1e-3, pi, 1.0, 4, 1e-3).area == 0.0);
    const double w = 3.0, sigma = 2.0;
    const auto s = critical_slopes_type2(make_problem(w, sigma, 6));
    for (int l = 1; l <= 3; ++l) {
        CHECK(brute_force_oracle(s[l - 1] - 1e-3, w, sigma, 6, 1e-4).layers == l - 1);
        CHECK(brute_force_oracle(s[l - 1] + 1e-3, w, sigma, 6, 1e-4).layers == l);
    }
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> uv(0.0, 8.0), uw(2.2, 3.8), us(0.3, 3.0);
    for (int t = 0; t < 8; ++t) {
        const double v = uv(rng), ww = uw(rng), sg = us(rng);
        const auto a = brute_force_oracle(v, ww, sg, 3, 5e-4), b = brute_force_oracle_serial(v, ww, sg, 3, 5e-4);
        CHECK(a.layers == b.layers);
        CHECK(a.area == b.area);
        CHECK(a.value == b.value);
    }
    CHECK_THROWS(brute_force_oracle(1.0, pi, 1.0, 4, 1e-2));
}
