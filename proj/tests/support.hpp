// Shared helpers for the test binaries: seeded parameter samplers and an
// exact evolution oracle built on the matrix exponential.
#pragma once

#include "nhtls/model.hpp"
#include "nhtls/operator.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <random>

namespace nhtls::testing {

// rho(t) = exp(-i H t) rho0 exp(i H^dagger t), hbar = 1.
inline Operator2 exact_evolution(const Operator2& h, const Operator2& rho0, double t) {
    const Operator2 u = (Complex(0.0, -t) * h).exp();
    return u * rho0 * u.adjoint();
}

inline Operator2 exact_evolution(const HamiltonianSpec& spec, const Operator2& rho0, double t) {
    return exact_evolution(build_total(spec), rho0, t);
}

inline double max_diff(const Operator2& a, const Operator2& b) { return (a - b).cwiseAbs().maxCoeff(); }

class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    int sign() { return uniform(0.0, 1.0) < 0.5 ? -1 : 1; }

    HamiltonianSpec general() {
        HamiltonianSpec s;
        s.omega = uniform(0.5, 2.0);
        s.gamma = uniform(0.05, 2.0);
        s.beta = uniform(-0.95, 0.95);
        const double bound = std::sqrt((1.0 + s.gamma * s.gamma) * (1.0 - s.beta * s.beta));
        s.a2 = uniform(-0.95, 0.95) * bound;
        s.w_sign = sign();
        return build_scenario({ScenarioKind::General, 0.5}, s);
    }

    // gamma_max bounds the e^{-2 gamma Omega t} decay of the raw trace.
    HamiltonianSpec exp_decay(double gamma_max = 2.0) {
        HamiltonianSpec s;
        s.omega = uniform(0.5, 2.0);
        s.gamma = uniform(0.05, gamma_max);
        s.a2 = sign() * uniform(0.05, 1.0);
        return build_scenario({ScenarioKind::ConservedEnergyExp, 0.5}, s);
    }

    HamiltonianSpec poly_decay(double gamma_max = 2.0) {
        HamiltonianSpec s;
        s.omega = uniform(0.5, 2.0);
        s.gamma = uniform(0.05, gamma_max);
        return build_scenario({ScenarioKind::ConservedEnergyPoly, 0.5}, s);
    }

    HamiltonianSpec vanishing_population() {
        HamiltonianSpec s;
        s.omega = uniform(0.5, 2.0);
        s.gamma = uniform(0.05, 2.0);
        s.beta = uniform(-0.95, 0.95);
        return build_scenario({ScenarioKind::VanishingPopulation, 0.5}, s);
    }

    HamiltonianSpec dephasing() {
        HamiltonianSpec s;
        s.omega = uniform(0.5, 2.0);
        s.gamma = uniform(0.2, 4.0);
        return build_scenario({ScenarioKind::Dephasing, 0.5}, s);
    }

    // p is returned through the out parameter; diag(1-p, p) is the paired initial state.
    HamiltonianSpec purification(double& p) {
        HamiltonianSpec s;
        s.omega = uniform(0.5, 2.0);
        s.gamma = uniform(0.2, 2.0);
        s.a2 = uniform(-0.95, 0.95) * std::sqrt(1.0 + s.gamma * s.gamma);
        s.w_sign = sign();
        p = uniform(0.05, 0.95);
        return build_scenario({ScenarioKind::Purification, p}, s);
    }

    // Hermitian, unit trace, det >= min_det (so strictly mixed when min_det > 0).
    Operator2 mixed_state(double min_det = 0.02) {
        for (;;) {
            const double x = uniform(-1.0, 1.0), y = uniform(-1.0, 1.0), z = uniform(-1.0, 1.0);
            const double r2 = x * x + y * y + z * z;
            if (r2 >= 1.0 || (1.0 - r2) / 4.0 < min_det) continue;
            return bloch_state(x, y, z);
        }
    }

    Operator2 pure_state() {
        const double x = uniform(-1.0, 1.0), y = uniform(-1.0, 1.0), z = uniform(-1.0, 1.0);
        const double r = std::sqrt(x * x + y * y + z * z);
        return bloch_state(x / r, y / r, z / r);
    }

    static Operator2 bloch_state(double x, double y, double z) {
        return 0.5 * (PauliBasis::I() + x * PauliBasis::SX() + y * PauliBasis::SY() + z * PauliBasis::SZ());
    }

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

}  // namespace nhtls::testing
