#include "nhtls/model.hpp"

#include "nhtls/errors.hpp"

#include <array>
#include <cmath>
#include <sstream>
#include <utility>

namespace nhtls {

namespace {

constexpr std::array<std::pair<ScenarioKind, std::string_view>, 6> kScenarioNames{{
    {ScenarioKind::General, "general"},
    {ScenarioKind::ConservedEnergyExp, "conserved-energy-exp"},
    {ScenarioKind::ConservedEnergyPoly, "conserved-energy-poly"},
    {ScenarioKind::VanishingPopulation, "vanishing-population"},
    {ScenarioKind::Dephasing, "dephasing"},
    {ScenarioKind::Purification, "purification"},
}};

// Rounding in a2 = gamma*sqrt(1-beta^2) can leave a radicand of -1e-17.
constexpr double kRadicandSlack = 1e-14;

double signed_root(double radicand, int sign, const char* what) {
    if (radicand < -kRadicandSlack) {
        std::ostringstream msg;
        msg << what << ": W^2 = " << radicand << " < 0 (reality constraint violated)";
        throw ConstraintViolation(msg.str());
    }
    return (sign < 0 ? -1.0 : 1.0) * std::sqrt(std::max(radicand, 0.0));
}

void require_beta_zero(const HamiltonianSpec& base, ScenarioKind kind) {
    if (base.beta != 0.0) {
        std::ostringstream msg;
        msg << to_string(kind) << " requires beta = 0, got beta = " << base.beta;
        throw ConstraintViolation(msg.str());
    }
}

void require_pinned_a2(const HamiltonianSpec& base, double expected, ScenarioKind kind) {
    if (base.a2 != 0.0 && std::abs(base.a2 - expected) > 1e-12) {
        std::ostringstream msg;
        msg << to_string(kind) << " fixes a2 = " << expected << ", got a2 = " << base.a2;
        throw ConstraintViolation(msg.str());
    }
}

}  // namespace

std::string_view to_string(ScenarioKind kind) {
    for (const auto& [k, name] : kScenarioNames)
        if (k == kind) return name;
    return "unknown";
}

std::optional<ScenarioKind> scenario_from_string(std::string_view name) {
    for (const auto& [k, n] : kScenarioNames)
        if (n == name) return k;
    return std::nullopt;
}

bool satisfies_reality_constraint(double gamma, double beta, double a2) {
    return (1.0 + gamma * gamma) * (1.0 - beta * beta) - a2 * a2 >= -kRadicandSlack;
}

double w_parameter(const HamiltonianSpec& spec) {
    const double g2 = spec.gamma * spec.gamma;
    switch (spec.scenario) {
        case ScenarioKind::ConservedEnergyExp:
        case ScenarioKind::ConservedEnergyPoly:
            return 1.0;
        case ScenarioKind::Purification:
            return signed_root(1.0 + g2 - spec.a2 * spec.a2, spec.w_sign, "purification");
        case ScenarioKind::General:
        case ScenarioKind::VanishingPopulation:
        case ScenarioKind::Dephasing:
            break;
    }
    return signed_root((1.0 + g2) * (1.0 - spec.beta * spec.beta) - spec.a2 * spec.a2,
                       spec.w_sign, "general");
}

double critical_frequency(const HamiltonianSpec& spec) {
    return 2.0 * spec.omega * std::sqrt(1.0 - spec.a2 * spec.a2 / (spec.gamma * spec.gamma + 1.0));
}

DecayCoefficients decay_coefficients(const HamiltonianSpec& spec) {
    const double a0 = spec.gauge();
    switch (spec.scenario) {
        case ScenarioKind::ConservedEnergyExp:
            return {a0, 0.0, spec.a2, 1.0};
        case ScenarioKind::ConservedEnergyPoly:
            return {a0, 0.0, 0.0, 1.0};
        case ScenarioKind::Purification:
            return {a0, 0.0, spec.a2, w_parameter(spec)};
        case ScenarioKind::General:
        case ScenarioKind::VanishingPopulation:
        case ScenarioKind::Dephasing:
            break;
    }
    return {a0, -spec.gamma * spec.beta, spec.a2, -w_parameter(spec)};
}

Operator2 build_hermitian(const HamiltonianSpec& spec) {
    if (!(spec.omega > 0.0)) throw ConstraintViolation("omega must be positive");
    return -spec.omega * PauliBasis::SX();
}

Operator2 build_decay_operator(const HamiltonianSpec& spec) {
    if (!(spec.omega > 0.0)) throw ConstraintViolation("omega must be positive");
    const auto c = decay_coefficients(spec);
    return spec.omega * pauli_combination(c.identity, c.x, c.y, c.z);
}

Operator2 build_total(const HamiltonianSpec& spec) {
    return build_hermitian(spec) - Complex(0.0, 1.0) * build_decay_operator(spec);
}

HamiltonianSpec build_scenario(const Scenario& scenario, const HamiltonianSpec& base) {
    if (!(base.omega > 0.0)) throw ConstraintViolation("omega must be positive");
    if (base.w_sign != 1 && base.w_sign != -1)
        throw ConstraintViolation("w_sign must be +1 or -1");

    HamiltonianSpec spec = base;
    spec.scenario = scenario.kind;
    switch (scenario.kind) {
        case ScenarioKind::General:
            break;
        case ScenarioKind::ConservedEnergyExp:
            require_beta_zero(base, scenario.kind);
            if (base.a2 == 0.0)
                throw ConstraintViolation(
                    "conserved-energy-exp requires a2 != 0 (a2 = 0 is conserved-energy-poly)");
            break;
        case ScenarioKind::ConservedEnergyPoly:
            require_beta_zero(base, scenario.kind);
            require_pinned_a2(base, 0.0, scenario.kind);
            spec.a2 = 0.0;
            break;
        case ScenarioKind::VanishingPopulation: {
            if (std::abs(base.beta) > 1.0)
                throw ConstraintViolation("vanishing-population requires beta^2 <= 1");
            const double root = std::sqrt(1.0 - base.beta * base.beta);
            require_pinned_a2(base, base.gamma * root, scenario.kind);
            spec.a2 = base.gamma * root;
            // a2 + gamma*W = 0 selects the negative root.
            spec.w_sign = -1;
            break;
        }
        case ScenarioKind::Dephasing:
            require_beta_zero(base, scenario.kind);
            require_pinned_a2(base, -1.0, scenario.kind);
            spec.a2 = -1.0;
            // General-family member with W = -gamma.
            spec.w_sign = base.gamma >= 0.0 ? -1 : 1;
            break;
        case ScenarioKind::Purification:
            require_beta_zero(base, scenario.kind);
            if (base.gamma == 0.0)
                throw ConstraintViolation("purification requires gamma != 0");
            break;
    }
    w_parameter(spec);  // reality constraint
    return spec;
}

}  // namespace nhtls
