#include "nhtls/propagator.hpp"

#include "nhtls/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace nhtls {

namespace {

const Complex kI(0.0, 1.0);

void check_drift(const Operator2& rho, const char* where) {
    const double dev = hermiticity_deviation(rho);
    if (dev > kHermiticityTol * std::max(1.0, max_abs(rho))) {
        std::ostringstream msg;
        msg << where << ": Hermiticity deviation " << dev << " exceeds tolerance";
        throw HermiticityDrift(msg.str());
    }
}

// d(ln tr rho)/dt for a unit-trace rho_n: -2 tr(rho_n Gamma) = -2i tr(rho_n H_minus).
double log_trace_rate(const Operator2& rho_n, const Operator2& h_minus) {
    return (-2.0 * kI * (rho_n * h_minus).trace()).real();
}

struct NormalizedState {
    Operator2 rho;
    double log_trace;
};

NormalizedState rk4_normalized(const NormalizedState& s, const Operator2& hp, const Operator2& hm,
                               double dt) {
    auto f = [&](const Operator2& r) { return nonlinear_rhs(r, hp, hm); };
    auto g = [&](const Operator2& r) { return log_trace_rate(r, hm); };
    const Operator2 k1 = f(s.rho);
    const double l1 = g(s.rho);
    const Operator2 r2 = s.rho + 0.5 * dt * k1;
    const Operator2 k2 = f(r2);
    const double l2 = g(r2);
    const Operator2 r3 = s.rho + 0.5 * dt * k2;
    const Operator2 k3 = f(r3);
    const double l3 = g(r3);
    const Operator2 r4 = s.rho + dt * k3;
    const Operator2 k4 = f(r4);
    const double l4 = g(r4);

    Operator2 next = s.rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    check_drift(next, "step_nonlinear");
    next = hermitian_part(next);
    next /= real_trace(next);
    return {next, s.log_trace + (dt / 6.0) * (l1 + 2.0 * l2 + 2.0 * l3 + l4)};
}

StateVector statevector_rhs(const StateVector& psi, const Operator2& hp, const Operator2& hm) {
    const Complex hm_avg = psi.dot(hm * psi);  // <psi|H-|psi>
    return -kI * ((hp + hm) * psi - hm_avg * psi);
}

struct VectorState {
    StateVector psi;
    double log_trace;
};

VectorState rk4_vector(const VectorState& s, const Operator2& hp, const Operator2& hm, double dt) {
    auto f = [&](const StateVector& v) { return statevector_rhs(v, hp, hm); };
    auto g = [&](const StateVector& v) { return (-2.0 * kI * v.dot(hm * v)).real(); };
    const StateVector k1 = f(s.psi);
    const double l1 = g(s.psi);
    const StateVector v2 = s.psi + 0.5 * dt * k1;
    const StateVector k2 = f(v2);
    const double l2 = g(v2);
    const StateVector v3 = s.psi + 0.5 * dt * k2;
    const StateVector k3 = f(v3);
    const double l3 = g(v3);
    const StateVector v4 = s.psi + dt * k3;
    const StateVector k4 = f(v4);
    const double l4 = g(v4);
    StateVector next = s.psi + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    next.normalize();
    return {next, s.log_trace + (dt / 6.0) * (l1 + 2.0 * l2 + 2.0 * l3 + l4)};
}

// Dominant eigenvector of a rank-one Hermitian matrix, unit norm.
StateVector pure_state_vector(const Operator2& rho) {
    const Operator2 rn = normalized(rho);
    if (std::abs(determinant(rn)) > 1e-10)
        throw std::invalid_argument("StateVector form needs a pure initial state (det rho' = 0)");
    Eigen::SelfAdjointEigenSolver<Operator2> eig(hermitian_part(rn));
    StateVector psi = eig.eigenvectors().col(1);
    // Fix the global phase so the first nonzero component is real and positive.
    const Complex lead = std::abs(psi(0)) > 1e-12 ? psi(0) : psi(1);
    psi *= std::conj(lead) / std::abs(lead);
    return psi;
}

std::size_t step_count(const IntegratorConfig& cfg) {
    const double ratio = cfg.t_max / cfg.dt;
    return static_cast<std::size_t>(std::max(1.0, std::ceil(ratio - 1e-9)));
}

}  // namespace

void IntegratorConfig::validate() const {
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
    if (!(t_max > 0.0)) throw std::invalid_argument("t_max must be positive");
    if (dt > t_max) throw std::invalid_argument("dt must not exceed t_max");
    if (record_every < 1) throw std::invalid_argument("record_every must be >= 1");
}

Operator2 linear_rhs(const Operator2& rho, const Operator2& h_plus, const Operator2& h_minus) {
    return -kI * commutator(h_plus, rho) - kI * anticommutator(h_minus, rho);
}

Operator2 nonlinear_rhs(const Operator2& rho_n, const Operator2& h_plus,
                        const Operator2& h_minus) {
    const Complex tr_hm = (rho_n * h_minus).trace();
    return -kI * (commutator(h_plus, rho_n) + anticommutator(h_minus, rho_n) -
                  2.0 * tr_hm * rho_n);
}

Operator2 step_linear(const Operator2& rho, const Operator2& h_plus, const Operator2& h_minus,
                      double dt) {
    const Operator2 k1 = linear_rhs(rho, h_plus, h_minus);
    const Operator2 k2 = linear_rhs(rho + 0.5 * dt * k1, h_plus, h_minus);
    const Operator2 k3 = linear_rhs(rho + 0.5 * dt * k2, h_plus, h_minus);
    const Operator2 k4 = linear_rhs(rho + dt * k3, h_plus, h_minus);
    const Operator2 next = rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    check_drift(next, "step_linear");
    return hermitian_part(next);
}

Operator2 step_nonlinear(const Operator2& rho_n, const Operator2& h_plus,
                         const Operator2& h_minus, double dt) {
    return rk4_normalized({rho_n, 0.0}, h_plus, h_minus, dt).rho;
}

StateVector step_statevector(const StateVector& psi, const Operator2& h_plus,
                             const Operator2& h_minus, double dt) {
    return rk4_vector({psi, 0.0}, h_plus, h_minus, dt).psi;
}

StateTrajectory propagate(const HamiltonianSpec& spec, const DensityState& initial,
                          const IntegratorConfig& cfg) {
    const auto parts = split_hamiltonian(build_total(spec));
    return propagate(parts.h_plus, parts.h_minus, initial, cfg, spec.omega);
}

StateTrajectory propagate(const Operator2& h_plus, const Operator2& h_minus,
                          const DensityState& initial, const IntegratorConfig& cfg,
                          double omega) {
    cfg.validate();
    check_drift(initial.rho, "propagate: initial state");
    const Operator2 gamma = kI * h_minus;
    const std::size_t n = step_count(cfg);
    const double h = cfg.t_max / static_cast<double>(n);
    const auto every = static_cast<std::size_t>(cfg.record_every);

    StateTrajectory traj;
    traj.form = cfg.form;
    const std::size_t expected = n / every + 2;
    traj.times.reserve(expected);
    traj.normalized_states.reserve(expected);
    traj.observables.reserve(expected);

    const double trace0 = real_trace(initial.rho);
    auto record = [&](double t, const Operator2& rho_n, double raw_trace) {
        traj.times.push_back(t);
        traj.normalized_states.push_back(rho_n);
        traj.observables.push_back(observe(rho_n, raw_trace, t, h_plus, gamma, omega));
    };
    auto due = [&](std::size_t k) { return k % every == 0 || k == n; };

    switch (cfg.form) {
        case Form::LinearRaw: {
            traj.raw_states.reserve(expected);
            Operator2 rho = hermitian_part(initial.rho);
            auto record_raw = [&](double t) {
                const double tr = real_trace(rho);
                if (std::abs(tr) > kRawTraceCeiling) {
                    std::ostringstream msg;
                    msg << "raw trace " << tr << " exceeds " << kRawTraceCeiling << " at t = " << t
                        << "; use the NonlinearNormalized form or shift the gauge a0";
                    throw Overflow(msg.str());
                }
                traj.raw_states.push_back(rho);
                record(t, normalized(rho), tr);
                traj.observables.back().det_raw = determinant(rho);
            };
            record_raw(initial.t);
            for (std::size_t k = 1; k <= n; ++k) {
                rho = step_linear(rho, h_plus, h_minus, h);
                if (due(k)) record_raw(initial.t + static_cast<double>(k) * h);
            }
            break;
        }
        case Form::NonlinearNormalized: {
            NormalizedState s{normalized(hermitian_part(initial.rho)), 0.0};
            record(initial.t, s.rho, trace0);
            for (std::size_t k = 1; k <= n; ++k) {
                s = rk4_normalized(s, h_plus, h_minus, h);
                if (due(k))
                    record(initial.t + static_cast<double>(k) * h, s.rho,
                           trace0 * std::exp(s.log_trace));
            }
            break;
        }
        case Form::StateVector: {
            VectorState s{pure_state_vector(initial.rho), 0.0};
            record(initial.t, projector(s.psi), trace0);
            for (std::size_t k = 1; k <= n; ++k) {
                s = rk4_vector(s, h_plus, h_minus, h);
                if (due(k))
                    record(initial.t + static_cast<double>(k) * h, projector(s.psi),
                           trace0 * std::exp(s.log_trace));
            }
            break;
        }
    }
    return traj;
}

EnsembleTrajectory propagate_ensemble(const HamiltonianSpec& spec, const MixedEnsemble& ensemble,
                                      const IntegratorConfig& cfg) {
    if (ensemble.components.empty()) throw std::invalid_argument("empty ensemble");
    const auto parts = split_hamiltonian(build_total(spec));
    std::vector<StateTrajectory> parts_traj;
    parts_traj.reserve(ensemble.components.size());
    for (const auto& c : ensemble.components)
        parts_traj.push_back(propagate(parts.h_plus, parts.h_minus, c.state, cfg, spec.omega));

    EnsembleTrajectory out;
    StateTrajectory& comb = out.combined;
    comb.form = cfg.form;
    comb.times = parts_traj.front().times;
    const std::size_t m = ensemble.components.size();
    for (std::size_t k = 0; k < comb.times.size(); ++k) {
        MixedEnsemble at_t;
        at_t.components.reserve(m);
        for (std::size_t i = 0; i < m; ++i) {
            // Rebuild rho_i(t) = tr_i(t) rho'_i(t) from the recorded trace.
            const double tr = parts_traj[i].observables[k].trace;
            at_t.components.push_back(
                {ensemble.components[i].weight, {tr * parts_traj[i].normalized_states[k], comb.times[k]}});
        }
        const auto w = ensemble_weights(at_t);
        Operator2 rho_n = Operator2::Zero();
        double raw_trace = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            rho_n += w[i] * parts_traj[i].normalized_states[k];
            raw_trace += ensemble.components[i].weight * parts_traj[i].observables[k].trace;
        }
        out.weights.push_back(w);
        comb.normalized_states.push_back(rho_n);
        comb.observables.push_back(
            observe(rho_n, raw_trace, comb.times[k], parts.h_plus, parts.gamma, spec.omega));
        if (cfg.form == Form::LinearRaw) comb.raw_states.push_back(raw_trace * rho_n);
    }
    return out;
}

SpinAverages long_time_averages(const StateTrajectory& traj) {
    if (traj.observables.empty()) throw std::invalid_argument("empty trajectory");
    const std::size_t n = traj.observables.size();
    const std::size_t tail = std::max<std::size_t>(1, n / 20);
    SpinAverages s;
    for (std::size_t k = n - tail; k < n; ++k) {
        s.sx += traj.observables[k].sx;
        s.sy += traj.observables[k].sy;
        s.sz += traj.observables[k].sz;
    }
    const double inv = 1.0 / static_cast<double>(tail);
    return {s.sx * inv, s.sy * inv, s.sz * inv};
}

}  // namespace nhtls
