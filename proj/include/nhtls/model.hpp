// model.hpp: the parametrized non-Hermitian two-level Hamiltonian family and
// its named special cases.
//
// H = H_plus - i*Gamma with H_plus = -Omega*sigma_x and the decay rate operator
//
//   Gamma = Omega * (a0*I + a1*sigma_x + a2*sigma_y + a3*sigma_z).
//
// For the general family a1 = -gamma*beta and a3 = -W with
// W = w_sign * sqrt((1 + gamma^2)(1 - beta^2) - a2^2); this is the sign
// convention under which the closed-form solutions in analytic.hpp hold and
// <sigma_x> relaxes to +beta.
#pragma once

#include "nhtls/operator.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace nhtls {

enum class ScenarioKind {
    General,
    ConservedEnergyExp,   // beta = 0, Gamma = Omega(a2 sigma_y + sigma_z + a0 I)
    ConservedEnergyPoly,  // beta = 0, Gamma = Omega(sigma_z + a0 I)
    VanishingPopulation,  // a2 = gamma*sqrt(1 - beta^2), |W| = sqrt(1 - beta^2)
    Dephasing,            // Gamma = -Omega[sigma_y - gamma sigma_z] + Omega a0 I
    Purification,         // beta = 0, Gamma = Omega(a2 sigma_y + W sigma_z + a0 I), W^2 = 1 + gamma^2 - a2^2
};

std::string_view to_string(ScenarioKind kind);
std::optional<ScenarioKind> scenario_from_string(std::string_view name);

struct HamiltonianSpec {
    double omega = 1.0;
    double gamma = 0.0;
    double beta = 0.0;
    double a2 = 0.0;
    std::optional<double> a0;  // gauge; defaults to gamma
    int w_sign = +1;
    ScenarioKind scenario = ScenarioKind::General;

    double gauge() const { return a0.value_or(gamma); }
    double decay_rate() const { return 2.0 * gamma * omega; }         // Gamma coefficient
    double oscillation_frequency() const { return 2.0 * beta * omega; }  // omega_osc
};

struct Scenario {
    ScenarioKind kind = ScenarioKind::General;
    double p = 0.5;  // Purification: initial state diag(1-p, p)
};

// Gamma = Omega * (identity*I + x*sigma_x + y*sigma_y + z*sigma_z)
struct DecayCoefficients {
    double identity = 0.0;
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

// (1 + gamma^2)(1 - beta^2) - a2^2 >= 0; W = 0 is accepted.
bool satisfies_reality_constraint(double gamma, double beta, double a2);

// Signed root W of the scenario's parametrization (1 for the conserved-energy
// cases, where sigma_z has a fixed unit coefficient). Throws ConstraintViolation
// when the radicand is negative.
double w_parameter(const HamiltonianSpec& spec);

// omega_c = 2 Omega sqrt(1 - a2^2 / (gamma^2 + 1))
double critical_frequency(const HamiltonianSpec& spec);

DecayCoefficients decay_coefficients(const HamiltonianSpec& spec);

Operator2 build_hermitian(const HamiltonianSpec& spec);
Operator2 build_decay_operator(const HamiltonianSpec& spec);
Operator2 build_total(const HamiltonianSpec& spec);

// Checks the scenario's constraints against base and returns the resolved spec.
// Throws ConstraintViolation if base pins a parameter the scenario contradicts.
HamiltonianSpec build_scenario(const Scenario& scenario, const HamiltonianSpec& base);

}  // namespace nhtls
