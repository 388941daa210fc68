// operator.hpp: 2x2 complex operator algebra, Pauli basis, density states.
//
// Units: hbar = 1. Energies are in units of hbar*Omega, times in 1/Omega.
// Basis ordering is (|e>, |g>), so |e><e| = diag(1, 0) and sigma_z = diag(1, -1).
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace nhtls {

using Complex = std::complex<double>;
using Operator2 = Eigen::Matrix2cd;
using StateVector = Eigen::Vector2cd;

inline constexpr double kTraceFloor = 1e-12;     // eps_tr
inline constexpr double kHermiticityTol = 1e-10;  // tol_herm

struct PauliBasis {
    static const Operator2& I();
    static const Operator2& SX();
    static const Operator2& SY();
    static const Operator2& SZ();
};

// Returns c0*I + cx*SX + cy*SY + cz*SZ.
Operator2 pauli_combination(Complex c0, Complex cx, Complex cy, Complex cz);

inline Operator2 hermitian_part(const Operator2& a) { return 0.5 * (a + a.adjoint()); }
inline Operator2 antihermitian_part(const Operator2& a) { return 0.5 * (a - a.adjoint()); }

inline Operator2 commutator(const Operator2& a, const Operator2& b) { return a * b - b * a; }
inline Operator2 anticommutator(const Operator2& a, const Operator2& b) { return a * b + b * a; }

// max_ij |A_ij - conj(A_ji)|
double hermiticity_deviation(const Operator2& a);

// Largest entry modulus.
double max_abs(const Operator2& a);

struct SplitHamiltonian {
    Operator2 h_plus;   // (H + H†)/2
    Operator2 h_minus;  // (H - H†)/2
    Operator2 gamma;    // decay rate operator i*H_minus
};

SplitHamiltonian split_hamiltonian(const Operator2& h);

// Real part of the trace; the imaginary part of a Hermitian operator's trace is noise.
inline double real_trace(const Operator2& a) { return a.trace().real(); }

// rho / tr(rho). Throws TraceCollapse if tr(rho) < kTraceFloor.
Operator2 normalized(const Operator2& rho);

struct DensityState {
    Operator2 rho = Operator2::Zero();  // unnormalized
    double t = 0.0;
};

inline Operator2 normalized(const DensityState& state) { return normalized(state.rho); }

// Standard initial states.
Operator2 excited_state();                // |e><e|
Operator2 ground_state();                 // |g><g|
Operator2 plus_coherent_state();          // all entries 1/2
Operator2 diag_mixed_state(double p);     // (1-p)|e><e| + p|g><g|

Operator2 projector(const StateVector& psi);

struct EnsembleComponent {
    double weight = 0.0;
    DensityState state;
};

struct MixedEnsemble {
    std::vector<EnsembleComponent> components;
};

// sum_i p_i rho_i
Operator2 ensemble_density(const MixedEnsemble& e);

// p'_i = p_i tr(rho_i) / tr(sum_j p_j rho_j). Throws TraceCollapse on vanishing total trace.
std::vector<double> ensemble_weights(const MixedEnsemble& e);

}  // namespace nhtls
