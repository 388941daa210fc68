#include "nhtls/operator.hpp"

#include "nhtls/errors.hpp"

#include <cmath>
#include <sstream>

namespace nhtls {

namespace {

Operator2 make(Complex a, Complex b, Complex c, Complex d) {
    Operator2 m;
    m << a, b, c, d;
    return m;
}

}  // namespace

const Operator2& PauliBasis::I() {
    static const Operator2 m = make(1.0, 0.0, 0.0, 1.0);
    return m;
}

const Operator2& PauliBasis::SX() {
    static const Operator2 m = make(0.0, 1.0, 1.0, 0.0);
    return m;
}

const Operator2& PauliBasis::SY() {
    static const Operator2 m = make(0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0);
    return m;
}

const Operator2& PauliBasis::SZ() {
    static const Operator2 m = make(1.0, 0.0, 0.0, -1.0);
    return m;
}

Operator2 pauli_combination(Complex c0, Complex cx, Complex cy, Complex cz) {
    return c0 * PauliBasis::I() + cx * PauliBasis::SX() + cy * PauliBasis::SY() +
           cz * PauliBasis::SZ();
}

double hermiticity_deviation(const Operator2& a) {
    return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

double max_abs(const Operator2& a) { return a.cwiseAbs().maxCoeff(); }

SplitHamiltonian split_hamiltonian(const Operator2& h) {
    SplitHamiltonian s;
    s.h_plus = hermitian_part(h);
    s.h_minus = antihermitian_part(h);
    s.gamma = Complex(0.0, 1.0) * s.h_minus;
    return s;
}

Operator2 normalized(const Operator2& rho) {
    const double tr = real_trace(rho);
    if (!(tr >= kTraceFloor)) {
        std::ostringstream msg;
        msg << "normalization impossible: tr(rho) = " << tr << " is below " << kTraceFloor;
        throw TraceCollapse(msg.str());
    }
    return rho / tr;
}

Operator2 excited_state() { return make(1.0, 0.0, 0.0, 0.0); }

Operator2 ground_state() { return make(0.0, 0.0, 0.0, 1.0); }

Operator2 plus_coherent_state() { return make(0.5, 0.5, 0.5, 0.5); }

Operator2 diag_mixed_state(double p) { return make(1.0 - p, 0.0, 0.0, p); }

Operator2 projector(const StateVector& psi) { return psi * psi.adjoint(); }

Operator2 ensemble_density(const MixedEnsemble& e) {
    Operator2 rho = Operator2::Zero();
    for (const auto& c : e.components) rho += c.weight * c.state.rho;
    return rho;
}

std::vector<double> ensemble_weights(const MixedEnsemble& e) {
    const double total = real_trace(ensemble_density(e));
    if (!(std::abs(total) >= kTraceFloor)) {
        throw TraceCollapse("ensemble weights undefined: total trace vanishes");
    }
    std::vector<double> w;
    w.reserve(e.components.size());
    for (const auto& c : e.components) w.push_back(c.weight * real_trace(c.state.rho) / total);
    return w;
}

}  // namespace nhtls
