// propagator.hpp: fixed-step RK4 evolution of the density matrix and of
// pure-state vectors under a non-Hermitian Hamiltonian H = H_plus + H_minus.
#pragma once

#include "nhtls/model.hpp"
#include "nhtls/observables.hpp"
#include "nhtls/operator.hpp"

#include <vector>

namespace nhtls {

enum class Form {
    LinearRaw,            // d rho/dt = -i[H+, rho] - i{H-, rho}
    NonlinearNormalized,  // trace-preserving equation for rho' = rho / tr rho
    StateVector,          // nonlinear equation for |psi'>, pure states only
};

enum class Method { RK4 };

// LinearRaw runs abort once |tr rho| exceeds this.
inline constexpr double kRawTraceCeiling = 1e12;

struct IntegratorConfig {
    double dt = 0.002;  // units of 1/Omega
    double t_max = 10.0;
    Method method = Method::RK4;
    Form form = Form::NonlinearNormalized;
    int record_every = 1;

    // Throws std::invalid_argument unless dt > 0, t_max > 0, dt <= t_max, record_every >= 1.
    void validate() const;
};

struct StateTrajectory {
    Form form = Form::NonlinearNormalized;
    std::vector<double> times;
    std::vector<Operator2> raw_states;  // LinearRaw only
    std::vector<Operator2> normalized_states;
    std::vector<ObservableRecord> observables;

    std::size_t size() const { return times.size(); }
};

// One RK4 step each. Results are projected back onto Hermitian matrices; a
// pre-projection deviation above kHermiticityTol (relative to max(1, |rho|))
// throws HermiticityDrift.
Operator2 step_linear(const Operator2& rho, const Operator2& h_plus, const Operator2& h_minus,
                      double dt);
Operator2 step_nonlinear(const Operator2& rho_n, const Operator2& h_plus,
                         const Operator2& h_minus, double dt);
StateVector step_statevector(const StateVector& psi, const Operator2& h_plus,
                             const Operator2& h_minus, double dt);

// Right-hand sides of the two density-matrix equations (hbar = 1).
Operator2 linear_rhs(const Operator2& rho, const Operator2& h_plus, const Operator2& h_minus);
Operator2 nonlinear_rhs(const Operator2& rho_n, const Operator2& h_plus,
                        const Operator2& h_minus);

StateTrajectory propagate(const HamiltonianSpec& spec, const DensityState& initial,
                          const IntegratorConfig& cfg);

// Same, for arbitrary H_plus / H_minus. omega sets the unit of energy_avg and gamma_avg.
StateTrajectory propagate(const Operator2& h_plus, const Operator2& h_minus,
                          const DensityState& initial, const IntegratorConfig& cfg,
                          double omega = 1.0);

struct EnsembleTrajectory {
    StateTrajectory combined;                  // rho'(t) = sum_i p'_i(t) rho'_i(t)
    std::vector<std::vector<double>> weights;  // weights[k][i] = p'_i(t_k)
};

// Propagates every component separately and recombines with p'_i(t).
EnsembleTrajectory propagate_ensemble(const HamiltonianSpec& spec, const MixedEnsemble& ensemble,
                                      const IntegratorConfig& cfg);

// Mean spin averages over the final 5% of the recorded grid.
SpinAverages long_time_averages(const StateTrajectory& traj);

}  // namespace nhtls
