// observables.hpp: physical quantities computed from (possibly unnormalized)
// density matrices.
#pragma once

#include "nhtls/operator.hpp"

namespace nhtls {

struct StateTrajectory;

struct SpinAverages {
    double sx = 0.0;
    double sy = 0.0;
    double sz = 0.0;
};

struct ObservableRecord {
    double t = 0.0;
    double sx = 0.0;
    double sy = 0.0;
    double sz = 0.0;
    double trace = 0.0;       // tr(rho), unnormalized
    double det_raw = 0.0;     // det(rho)
    double det_norm = 0.0;    // det(rho'), computed from rho' directly
    double purity = 0.0;      // tr(rho'^2)
    double energy_avg = 0.0;  // <H_plus> / (hbar Omega)
    double gamma_avg = 0.0;   // <Gamma> / (hbar Omega)
    double bloch_norm_sq = 0.0;
};

inline constexpr double kImaginaryTol = 1e-10;

// tr(rho chi) / tr(rho). Throws TraceCollapse if tr(rho) < kTraceFloor.
Complex average(const Operator2& rho, const Operator2& obs);

// Real part of average(); throws HermiticityDrift if the imaginary part exceeds kImaginaryTol.
double real_average(const Operator2& rho, const Operator2& obs);

SpinAverages spin_averages(const Operator2& rho);

// Real part of det; for Hermitian input the imaginary part is rounding.
double determinant(const Operator2& rho);

// tr(rho^2) / tr(rho)^2
double purity(const Operator2& rho);

// R(rho, Gamma) = tr(rho' Gamma) tr(rho'^2) - tr(rho'^2 Gamma); d(purity)/dt = 4 R.
double purity_rate(const Operator2& rho, const Operator2& gamma);

// Two-level identity R = det(rho') (tr Gamma - 2 tr(rho' Gamma)).
double purity_rate_factorized(const Operator2& rho, const Operator2& gamma);

// Observables of rho_normalized (unit trace) whose unnormalized trace is raw_trace.
ObservableRecord observe(const Operator2& rho_normalized, double raw_trace, double t,
                         const Operator2& h_plus, const Operator2& gamma, double omega);

// max_t |det rho(t) - det rho(0) exp(-2 t tr Gamma)| / max(|reference|, 1e-14).
// Needs raw states (LinearRaw); throws FormMismatch otherwise.
double determinant_law_check(const StateTrajectory& traj, const Operator2& gamma);

}  // namespace nhtls
