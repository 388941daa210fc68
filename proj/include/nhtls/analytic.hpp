// analytic.hpp: closed-form solutions of the linear density-matrix equation
// for the general model and its special scenarios.
//
// Unless noted otherwise, solutions use the gauge a0 = gamma and the initial
// state each scenario is paired with: |e><e| for the general, conserved-energy
// and vanishing-population cases, all entries 1/2 for dephasing, and
// diag(1-p, p) for purification.
#pragma once

#include "nhtls/model.hpp"
#include "nhtls/observables.hpp"
#include "nhtls/operator.hpp"

#include <array>

namespace nhtls {

inline constexpr double kDenominatorFloor = 1e-12;  // eps_den for beta^2 + gamma^2
inline constexpr double kUpsilonTol = 1e-6;         // eps_ups

// Coefficient table of the general solution. Arrays are indexed by the
// subscript (A[1] is A_1); unused slots stay zero.
struct GeneralSolutionCoefficients {
    std::array<Complex, 10> A{};
    std::array<Complex, 6> B{};
    std::array<Complex, 8> C{};
    std::array<Complex, 5> D{};
    double Gamma = 0.0;        // 2 gamma Omega
    double omega_osc = 0.0;    // 2 beta Omega
    double alpha = 0.0;        // 2 a2 Omega
    double gamma_tilde = 0.0;  // sqrt(1 + gamma^2)
    double W = 0.0;

    static GeneralSolutionCoefficients from(const HamiltonianSpec& spec);
};

// Evaluates the general closed form; coefficients are computed once.
// Valid for every spec of the general family (General, VanishingPopulation,
// Dephasing, and Purification with its W of opposite sign); throws
// DegenerateParameters otherwise or when beta^2 + gamma^2 < kDenominatorFloor.
class GeneralSolution {
public:
    explicit GeneralSolution(const HamiltonianSpec& spec);

    const GeneralSolutionCoefficients& coefficients() const { return c_; }
    Operator2 rho(double t) const;
    double trace(double t) const;
    SpinAverages averages(double t) const;

private:
    // e^{-|Gamma| t} times cos, sin, cosh, sinh of the respective arguments;
    // envelope = e^{(|Gamma| - Gamma) t} restores the e^{-Gamma t} weighting.
    struct Basis {
        double c, s, ch, sh, envelope;
    };
    Basis basis(double t) const;
    double gauge_factor(double t) const;
    double T_tilde_scaled(const Basis& b) const;

    HamiltonianSpec spec_;
    GeneralSolutionCoefficients c_;
    double beta_ = 0.0;
    double gamma_ = 0.0;
    double a2_ = 0.0;
    double denom_ = 0.0;  // beta^2 + gamma^2
};

Operator2 general_rho(const HamiltonianSpec& spec, double t);
double general_trace(const HamiltonianSpec& spec, double t);
SpinAverages general_averages(const HamiltonianSpec& spec, double t);

// t -> infinity limits of the general averages. Throws DegenerateParameters
// for gamma = 0 (no limit) or a vanishing sigma_y denominator.
SpinAverages asymptotic_averages(const HamiltonianSpec& spec);

struct ScenarioSolution {
    Operator2 rho;
    double trace = 0.0;
    SpinAverages averages;
};

// beta = 0, a2 != 0; averages do not depend on gamma.
ScenarioSolution exp_decay_solution(double a2, double gamma, double omega, double t);
SpinAverages exp_decay_asymptote(double a2);

ScenarioSolution poly_decay_solution(double gamma, double omega, double t);

ScenarioSolution vanishing_population_solution(double beta, double gamma, double omega, double t);

ScenarioSolution dephasing_solution(double gamma, double omega, double t);

// Building blocks of the purification solution; W = w_sign sqrt(1 + gamma^2 - a2^2).
struct PurificationSolutionTerms {
    double p = 0.0;
    double a2 = 0.0;
    double gamma = 0.0;
    double a0 = 0.0;
    double omega = 1.0;
    double W = 0.0;
    double Gamma = 0.0;        // 2 gamma Omega
    double Gamma_tilde = 0.0;  // Gamma + 2 a0 Omega
    double gamma_tilde_sq = 0.0;
    double p1 = 0.0;  // 2p - 1
    double p_plus = 0.0;
    double p_minus = 0.0;
    double Upsilon = 0.0;

    PurificationSolutionTerms(double p, double a2, double gamma, double a0, double omega,
                              int w_sign = +1);

    double Lambda(double t) const;  // (2 gamma)^-2 exp(-Gamma_tilde t)
    double k1(double eta) const;
    double k2(double eta) const;
};

// p is not restricted to (0, 1): values outside give the trace-one pseudo-states
// on which Upsilon can vanish.
Operator2 purification_solution(double p, double a2, double gamma, double a0, double omega,
                                double t, int w_sign = +1);
double purification_trace(double p, double a2, double gamma, double a0, double omega, double t,
                          int w_sign = +1);

enum class PurificationBranch { AsymptoticallyPure, AsymptoticallyMixed };

PurificationBranch purification_branch(double p, double a2, double gamma, int w_sign = +1);

// p on the surface Upsilon = 0.
double purification_critical_p(double a2, double gamma, int w_sign = +1);

// Normalized rho'(infinity) for the branch selected by purification_branch.
Operator2 purification_limit(double p, double a2, double gamma, int w_sign = +1);

// lim det rho'(t) on the mixed branch.
double purification_mixed_det_limit(double a2, double gamma, int w_sign = +1);

}  // namespace nhtls
