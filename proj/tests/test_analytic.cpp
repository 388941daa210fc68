#include "nhtls/analytic.hpp"
#include "nhtls/errors.hpp"
#include "nhtls/propagator.hpp"
#include "support.hpp"

#include <doctest.h>

#include <tuple>

using namespace nhtls;
using nhtls::testing::exact_evolution;
using nhtls::testing::max_diff;
using nhtls::testing::Sampler;

namespace {

HamiltonianSpec spec(ScenarioKind kind, double gamma, double beta, double a2, int w_sign = 1,
                     double omega = 1.0) {
    HamiltonianSpec s;
    s.gamma = gamma;
    s.beta = beta;
    s.a2 = a2;
    s.w_sign = w_sign;
    s.omega = omega;
    return build_scenario({kind, 0.5}, s);
}

// Relative comparison for raw matrices whose scale changes with t.
double rel_diff(const Operator2& a, const Operator2& b) {
    return max_diff(a, b) / std::max(1.0, b.cwiseAbs().maxCoeff());
}

// normalized() rejects negative traces, which pseudo-states reach.
Operator2 by_trace(const Operator2& rho) { return rho / rho.trace(); }

void check_averages(const SpinAverages& a, const SpinAverages& b, double tol) {
    CHECK(std::abs(a.sx - b.sx) <= tol);
    CHECK(std::abs(a.sy - b.sy) <= tol);
    CHECK(std::abs(a.sz - b.sz) <= tol);
}

}  // namespace

TEST_CASE("coefficient table identities") {
    Sampler s(51);
    for (int k = 0; k < 100; ++k) {
        const auto sp = s.general();
        const auto c = GeneralSolutionCoefficients::from(sp);
        CHECK(c.A[3] == std::conj(c.A[2]));
        CHECK(c.B[3] == std::conj(c.B[2]));
        CHECK(c.D[3] == std::conj(c.D[2]));
        CHECK(c.A[4] == -c.C[4]);
        CHECK(c.B[4] == Complex(0.0));
        CHECK(c.D[4] == Complex(0.0));
        const double s2 = sp.beta * sp.beta + sp.gamma * sp.gamma;
        CHECK(std::abs(c.A[1] + c.C[1] - 2.0 * s2) <= 1e-14);
        CHECK(std::abs(c.A[5].real() + c.C[5].real() - s2) <= 1e-14);
        CHECK(c.Gamma == doctest::Approx(2.0 * sp.gamma * sp.omega));
        CHECK(c.omega_osc == doctest::Approx(2.0 * sp.beta * sp.omega));
        CHECK(c.alpha == doctest::Approx(2.0 * sp.a2 * sp.omega));
        CHECK(c.gamma_tilde == doctest::Approx(std::sqrt(1.0 + sp.gamma * sp.gamma)));
    }
}

TEST_CASE("general closed form") {
    Sampler s(52);
    SUBCASE("initial condition") {
        for (int k = 0; k < 20; ++k) {
            const auto sp = s.general();
            CHECK(max_diff(general_rho(sp, 0.0), excited_state()) <= 1e-15);
            CHECK(general_trace(sp, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
            check_averages(general_averages(sp, 0.0), {0.0, 0.0, 1.0}, 1e-15);
        }
    }
    SUBCASE("matches the matrix exponential, any gauge and root sign") {
        for (int k = 0; k < 100; ++k) {
            HamiltonianSpec sp = s.general();
            if (k % 2) sp.a0 = s.uniform(-1.0, 2.0);
            if (k % 3 == 0) sp.gamma = -sp.gamma;
            const GeneralSolution sol(sp);
            // keeps the raw trace well above the normalization floor
            const double scale = sp.omega * (1.0 + 2.0 * std::abs(sp.gamma) + 2.0 * std::abs(sp.gauge()));
            for (double x : {0.3, 1.7, 4.0, 9.5}) {
                const double t = x / scale;
                CHECK(rel_diff(sol.rho(t), exact_evolution(sp, excited_state(), t)) <= 1e-9);
                CHECK(std::abs(sol.trace(t) / real_trace(sol.rho(t)) - 1.0) <= 1e-12);
                check_averages(sol.averages(t), spin_averages(sol.rho(t)), 1e-12);
                CHECK(std::abs(determinant(normalized(sol.rho(t)))) <= 1e-10);
                CHECK(std::abs(purity(sol.rho(t)) - 1.0) <= 1e-10);
                CHECK(hermiticity_deviation(sol.rho(t)) <= 1e-12 * std::max(1.0, max_abs(sol.rho(t))));
            }
        }
    }
    SUBCASE("trace at beta = gamma = 0.9, Omega t = 2") {
        const auto sp = spec(ScenarioKind::General, 0.9, 0.9, 0.01);
        CHECK(general_trace(sp, 2.0) == doctest::Approx(real_trace(general_rho(sp, 2.0))).epsilon(1e-12));
    }
    SUBCASE("spot value against RK4") {
        const auto sp = spec(ScenarioKind::General, 0.45, 0.9, 0.01);
        IntegratorConfig cfg;
        cfg.t_max = 3.0;
        const auto traj = propagate(sp, {excited_state(), 0.0}, cfg);
        const auto& o = traj.observables.back();
        check_averages(general_averages(sp, 3.0), {o.sx, o.sy, o.sz}, 1e-6);
    }
    SUBCASE("beta = 0 has no coherence") {
        for (int k = 0; k < 20; ++k) {
            const double g = s.uniform(0.05, 2.0);
            const double a2 = s.uniform(-0.9, 0.9) * std::sqrt(1.0 + g * g);
            const auto sp = spec(ScenarioKind::General, g, 0.0, a2, s.sign());
            for (double t : {0.5, 2.0, 7.0}) CHECK(std::abs(general_averages(sp, t).sx) <= 1e-15);
        }
    }
    SUBCASE("long times stay finite") {
        const auto sp = spec(ScenarioKind::General, -0.8, 0.3, 0.2);
        const auto a = general_averages(sp, 2000.0);
        CHECK(std::isfinite(a.sx));
        CHECK(std::isfinite(a.sz));
    }
    SUBCASE("degenerate input") {
        CHECK_THROWS_AS(GeneralSolution(spec(ScenarioKind::General, 0.0, 0.0, 0.3)), DegenerateParameters);
        CHECK_THROWS_AS(GeneralSolution(spec(ScenarioKind::ConservedEnergyExp, 0.5, 0.0, 0.3)),
                        DegenerateParameters);
    }
}

TEST_CASE("asymptotic averages") {
    SUBCASE("formula values") {
        const auto a = asymptotic_averages(spec(ScenarioKind::General, 1.0, 0.0, 0.0));
        CHECK(a.sz == doctest::Approx(std::sqrt(2.0) / 2.0));
        CHECK(a.sz == doctest::Approx(0.70711).epsilon(1e-5));
        for (double r : {0.2, 0.5, 1.0}) {
            const auto sp = spec(ScenarioKind::General, r * 0.9, 0.9, 0.01);
            CHECK(asymptotic_averages(sp).sx == 0.9);
        }
    }
    SUBCASE("agree with the closed form at large t, both signs of gamma") {
        Sampler s(53);
        int compared = 0;
        for (int k = 0; k < 200; ++k) {
            HamiltonianSpec sp = s.general();
            if (k % 2) sp.gamma = -sp.gamma;
            SpinAverages lim;
            try {
                lim = asymptotic_averages(sp);
            } catch (const DegenerateParameters&) {
                continue;
            }
            const double t = 40.0 / std::abs(sp.decay_rate());
            check_averages(general_averages(sp, t), lim, 1e-9);
            ++compared;
        }
        CHECK(compared > 150);
    }
    SUBCASE("vanishing population") {
        const auto a = asymptotic_averages(spec(ScenarioKind::VanishingPopulation, 0.45, 0.9, 0.0));
        CHECK(std::abs(a.sz) <= 1e-15);
        CHECK(a.sy == doctest::Approx(-std::sqrt(1.0 - 0.81)));
        CHECK(a.sy == doctest::Approx(-0.43589).epsilon(1e-5));
    }
    SUBCASE("degenerate cases") {
        CHECK_THROWS_AS(asymptotic_averages(spec(ScenarioKind::General, 0.0, 0.5, 0.1)), DegenerateParameters);
        // a2 - 1 - gamma (gamma + W) = 0 at gamma = 1, beta = 0, a2 = 1, W = -1
        CHECK_THROWS_AS(asymptotic_averages(spec(ScenarioKind::General, 1.0, 0.0, 1.0, -1)), DegenerateParameters);
    }
}

TEST_CASE("exponential decay") {
    Sampler s(54);
    SUBCASE("matches the matrix exponential") {
        for (int k = 0; k < 50; ++k) {
            const auto sp = s.exp_decay();
            const double scale = sp.omega * (1.0 + 2.0 * std::abs(sp.gamma));
            for (double x : {0.0, 0.8, 3.0, 9.0}) {
                const double t = x / scale;
                const auto sol = exp_decay_solution(sp.a2, sp.gamma, sp.omega, t);
                CHECK(rel_diff(sol.rho, exact_evolution(sp, excited_state(), t)) <= 1e-9);
                CHECK(std::abs(sol.trace / real_trace(sol.rho) - 1.0) <= 1e-12);
                check_averages(sol.averages, spin_averages(sol.rho), 1e-12);
            }
        }
    }
    SUBCASE("initial state") {
        const auto sol = exp_decay_solution(0.4, 0.7, 1.0, 0.0);
        CHECK(max_diff(sol.rho, excited_state()) <= 1e-15);
        CHECK(sol.averages.sz == doctest::Approx(1.0));
    }
    SUBCASE("averages do not depend on gamma") {
        for (double t = 0.0; t < 10.0; t += 0.37) {
            const auto a = exp_decay_solution(0.35, 0.4, 1.0, t).averages;
            const auto b = exp_decay_solution(0.35, 1.9, 1.0, t).averages;
            check_averages(a, b, 1e-12);
        }
    }
    SUBCASE("limits") {
        check_averages(exp_decay_solution(0.3, 0.6, 1.0, 100.0).averages, {0.0, -1.0, 0.0}, 1e-12);
        check_averages(exp_decay_asymptote(0.3), {0.0, -1.0, 0.0}, 0.0);
        const auto neg = exp_decay_asymptote(-0.3);
        CHECK(neg.sy == doctest::Approx(-0.83486).epsilon(1e-5));
        CHECK(neg.sz == doctest::Approx(-0.55046).epsilon(1e-5));
        check_averages(exp_decay_solution(-0.3, 0.6, 1.0, 200.0).averages, neg, 1e-12);
    }
    SUBCASE("a2 = 0 is the polynomial case") {
        CHECK_THROWS_AS(exp_decay_solution(0.0, 0.6, 1.0, 1.0), DegenerateParameters);
        CHECK_THROWS_AS(exp_decay_asymptote(0.0), DegenerateParameters);
    }
}

TEST_CASE("polynomial decay") {
    Sampler s(55);
    for (int k = 0; k < 50; ++k) {
        const auto sp = s.poly_decay();
        const double scale = sp.omega * (1.0 + 2.0 * sp.gamma);
        for (double x : {0.0, 0.8, 3.0, 9.0}) {
            const double t = x / scale;
            const auto sol = poly_decay_solution(sp.gamma, sp.omega, t);
            CHECK(rel_diff(sol.rho, exact_evolution(sp, excited_state(), t)) <= 1e-9);
            check_averages(sol.averages, spin_averages(sol.rho), 1e-12);
        }
    }
    const auto one = poly_decay_solution(0.5, 1.0, 1.0).averages;
    CHECK(one.sz == -1.0);
    CHECK(one.sy == 0.0);
    CHECK(poly_decay_solution(0.5, 2.0, 0.5).averages.sz == -1.0);  // Omega t = 1
    CHECK(poly_decay_solution(0.5, 1.0, 0.0).averages.sz == 1.0);
    const auto late = poly_decay_solution(0.5, 1.0, 1e6).averages;
    CHECK(late.sy == doctest::Approx(-1.0).epsilon(1e-5));
    CHECK(std::abs(late.sz) <= 1e-5);
}

TEST_CASE("vanishing population") {
    Sampler s(56);
    SUBCASE("matches the matrix exponential and the general solution") {
        for (int k = 0; k < 50; ++k) {
            const auto sp = s.vanishing_population();
            for (double t : {0.0, 0.8, 3.0, 9.0}) {
                const auto sol = vanishing_population_solution(sp.beta, sp.gamma, sp.omega, t);
                CHECK(rel_diff(sol.rho, exact_evolution(sp, excited_state(), t)) <= 1e-9);
                CHECK(rel_diff(sol.rho, general_rho(sp, t)) <= 1e-12);
            }
        }
    }
    SUBCASE("beta = 0 has no coherence") {
        for (double t : {0.5, 2.0, 7.0})
            CHECK(std::abs(vanishing_population_solution(0.0, 0.8, 1.0, t).averages.sx) <= 1e-15);
    }
    SUBCASE("limits at beta = 0.9") {
        const auto a = vanishing_population_solution(0.9, 0.45, 1.0, 60.0).averages;
        CHECK(a.sx == doctest::Approx(0.9).epsilon(1e-9));
        CHECK(a.sy == doctest::Approx(-0.43589).epsilon(1e-5));
        CHECK(std::abs(a.sz) <= 1e-9);
    }
    SUBCASE("invalid input") {
        CHECK_THROWS_AS(vanishing_population_solution(1.2, 0.5, 1.0, 1.0), ConstraintViolation);
        CHECK_THROWS_AS(vanishing_population_solution(0.0, 0.0, 1.0, 1.0), DegenerateParameters);
    }
}

TEST_CASE("dephasing") {
    Sampler s(57);
    SUBCASE("matches the matrix exponential") {
        for (int k = 0; k < 50; ++k) {
            HamiltonianSpec sp = s.dephasing();
            if (k % 4 == 0) sp = spec(ScenarioKind::Dephasing, -s.uniform(0.2, 2.0), 0.0, 0.0);
            for (double t : {0.0, 0.4, 2.0, 6.0}) {
                const auto sol = dephasing_solution(sp.gamma, sp.omega, t);
                CHECK(rel_diff(sol.rho, exact_evolution(sp, plus_coherent_state(), t)) <= 1e-9);
                CHECK(std::abs(sol.trace - real_trace(sol.rho)) <= 1e-12 * std::max(1.0, sol.trace));
                check_averages(sol.averages, spin_averages(sol.rho), 1e-12);
            }
        }
    }
    SUBCASE("initial and limiting values") {
        check_averages(dephasing_solution(0.7, 1.0, 0.0).averages, {1.0, 0.0, 0.0}, 1e-15);
        for (double g : {4.0, 1.0, 0.2}) {
            const auto sol = dephasing_solution(g, 1.0, 30.0 / g);
            check_averages(sol.averages, {0.0, 0.0, -1.0}, 1e-12);
            CHECK(sol.rho(1, 1).real() == doctest::Approx(0.5 * (1.0 + 1.0 / (g * g))).epsilon(1e-12));
            CHECK(std::abs(sol.rho(0, 0)) <= 1e-12);
        }
    }
    SUBCASE("coherence at gamma = 1, Gamma t = 2") {
        const double sx = dephasing_solution(1.0, 1.0, 1.0).averages.sx;
        CHECK(sx == doctest::Approx(1.0 / (2.0 * std::cosh(2.0) - 1.0)).epsilon(1e-14));
        CHECK(sx == doctest::Approx(0.153271).epsilon(1e-5));
    }
    SUBCASE("gamma = 0") { CHECK_THROWS_AS(dephasing_solution(0.0, 1.0, 1.0), DegenerateParameters); }
}

TEST_CASE("purification") {
    Sampler s(58);
    SUBCASE("matches the matrix exponential") {
        for (int k = 0; k < 60; ++k) {
            double p = 0.5;
            HamiltonianSpec sp = s.purification(p);
            if (k % 2) sp.a0 = s.uniform(-0.5, 2.0);
            for (double t : {0.0, 0.5, 2.0, 5.0}) {
                const Operator2 rho =
                    purification_solution(p, sp.a2, sp.gamma, sp.gauge(), sp.omega, t, sp.w_sign);
                CHECK(rel_diff(rho, exact_evolution(sp, diag_mixed_state(p), t)) <= 1e-9);
                const double tr =
                    purification_trace(p, sp.a2, sp.gamma, sp.gauge(), sp.omega, t, sp.w_sign);
                CHECK(std::abs(tr / real_trace(rho) - 1.0) <= 1e-12);
            }
        }
    }
    SUBCASE("initial condition") {
        CHECK(max_diff(purification_solution(0.3, 0.2, 0.8, 0.8, 1.0, 0.0), diag_mixed_state(0.3)) <= 1e-15);
    }
    SUBCASE("terms") {
        const PurificationSolutionTerms q(0.3, 0.2, 0.8, 0.5, 1.5);
        CHECK(q.W == doctest::Approx(std::sqrt(1.0 + 0.64 - 0.04)));
        CHECK(q.Gamma == doctest::Approx(2.4));
        CHECK(q.Gamma_tilde == doctest::Approx(2.4 + 1.5));
        CHECK(q.p1 == doctest::Approx(-0.4));
        CHECK(q.p_plus + q.p_minus == doctest::Approx(2.0 * q.gamma_tilde_sq));
        CHECK(q.Upsilon == doctest::Approx(q.p1 * (0.2 + 0.8 * q.W) + 1.64));
        CHECK(q.Lambda(0.0) == doctest::Approx(1.0 / (4.0 * 0.64)));
    }
    SUBCASE("asymptotically pure branch") {
        for (int k = 0; k < 50; ++k) {
            double p = 0.5;
            const auto sp = s.purification(p);
            REQUIRE(purification_branch(p, sp.a2, sp.gamma, sp.w_sign) == PurificationBranch::AsymptoticallyPure);
            const double t = 30.0 / sp.decay_rate();
            const Operator2 rho = normalized(purification_solution(p, sp.a2, sp.gamma, sp.gauge(), sp.omega, t, sp.w_sign));
            CHECK(std::abs(determinant(rho)) <= 1e-12);
            CHECK(max_diff(rho, purification_limit(p, sp.a2, sp.gamma, sp.w_sign)) <= 1e-9);
        }
    }
    SUBCASE("branch classification") {
        // a2 = 0, gamma = 1: |a2 + gamma W| = sqrt 2 < 2, pure for every p
        for (double p = 0.01; p < 1.0; p += 0.01)
            CHECK(purification_branch(p, 0.0, 1.0) == PurificationBranch::AsymptoticallyPure);
        // Upsilon = 1e-3 sits outside eps_ups
        const double a2 = 1.2, g = 1.0;
        const PurificationSolutionTerms base(0.5, a2, g, g, 1.0, -1);
        const double s_ = a2 + g * base.W;
        const double p_off = 0.5 * ((1e-3 - base.gamma_tilde_sq) / s_ + 1.0);
        CHECK(PurificationSolutionTerms(p_off, a2, g, g, 1.0, -1).Upsilon == doctest::Approx(1e-3));
        CHECK(purification_branch(p_off, a2, g, -1) == PurificationBranch::AsymptoticallyPure);
        const double pc = purification_critical_p(a2, g, -1);
        CHECK(std::abs(PurificationSolutionTerms(pc, a2, g, g, 1.0, -1).Upsilon) <= 1e-12);
        CHECK(purification_branch(pc, a2, g, -1) == PurificationBranch::AsymptoticallyMixed);
    }
    SUBCASE("mixed branch needs p outside (0, 1)") {
        // |a2 + gamma W| <= 1 + gamma^2 for every admissible (a2, gamma, W)
        for (int k = 0; k < 500; ++k) {
            double p = 0.5;
            const auto sp = s.purification(p);
            const PurificationSolutionTerms q(p, sp.a2, sp.gamma, sp.gamma, 1.0, sp.w_sign);
            CHECK(std::abs(sp.a2 + sp.gamma * q.W) <= q.gamma_tilde_sq + 1e-12);
            const double pc = purification_critical_p(sp.a2, sp.gamma, sp.w_sign);
            CHECK_FALSE((pc > 0.0 && pc < 1.0));
        }
    }
    SUBCASE("mixed-branch determinant limit") {
        for (auto [a2, g, w] : {std::tuple{1.2, 1.0, -1}, std::tuple{0.3, 0.7, 1}, std::tuple{-0.5, 0.6, 1}}) {
            // Upsilon = 0 cancels the leading growth, so the subleading terms are only
            // resolved up to e^{Gamma t} eps; Gamma t = 18 balances that against convergence.
            const double t = 9.0 / g;
            const double pc = purification_critical_p(a2, g, w);
            const Operator2 rho = purification_solution(pc, a2, g, g, 1.0, t, w);
            const Operator2 lim = purification_limit(pc, a2, g, w);
            CHECK(max_diff(by_trace(rho), lim) <= 1e-6);
            CHECK(determinant(lim) == doctest::Approx(purification_mixed_det_limit(a2, g, w)).epsilon(1e-10));
            // and against the exact evolution of the pseudo-state diag(1 - p, p)
            HamiltonianSpec sp;
            sp.gamma = g;
            sp.a2 = a2;
            sp.w_sign = w;
            sp = build_scenario({ScenarioKind::Purification, pc}, sp);
            const Operator2 ex = by_trace(exact_evolution(sp, diag_mixed_state(pc), t));
            CHECK(std::abs(determinant(ex) - purification_mixed_det_limit(a2, g, w)) <= 1e-5);
        }
        CHECK(purification_mixed_det_limit(0.3, 0.7, 1) == doctest::Approx(-0.1225).epsilon(1e-3));
    }
    SUBCASE("invalid input") {
        CHECK_THROWS_AS(purification_solution(0.3, 0.2, 0.0, 0.0, 1.0, 1.0), DegenerateParameters);
        CHECK_THROWS_AS(purification_solution(0.3, 1.5, 0.5, 0.5, 1.0, 1.0), DegenerateParameters);
        CHECK_THROWS_AS(purification_critical_p(-0.0, 0.0, 1), DegenerateParameters);
    }
}
