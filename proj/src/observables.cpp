#include "nhtls/observables.hpp"

#include "nhtls/errors.hpp"
#include "nhtls/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace nhtls {

Complex average(const Operator2& rho, const Operator2& obs) {
    const double tr = real_trace(rho);
    if (!(tr >= kTraceFloor)) {
        std::ostringstream msg;
        msg << "average undefined: tr(rho) = " << tr;
        throw TraceCollapse(msg.str());
    }
    return (rho * obs).trace() / tr;
}

double real_average(const Operator2& rho, const Operator2& obs) {
    const Complex v = average(rho, obs);
    if (std::abs(v.imag()) > kImaginaryTol) {
        std::ostringstream msg;
        msg << "average has imaginary part " << v.imag();
        throw HermiticityDrift(msg.str());
    }
    return v.real();
}

SpinAverages spin_averages(const Operator2& rho) {
    return {real_average(rho, PauliBasis::SX()), real_average(rho, PauliBasis::SY()),
            real_average(rho, PauliBasis::SZ())};
}

double determinant(const Operator2& rho) { return rho.determinant().real(); }

double purity(const Operator2& rho) {
    const double tr = real_trace(rho);
    if (!(std::abs(tr) >= kTraceFloor)) throw TraceCollapse("purity undefined: tr(rho) vanishes");
    return real_trace(rho * rho) / (tr * tr);
}

double purity_rate(const Operator2& rho, const Operator2& gamma) {
    const Operator2 rn = normalized(rho);
    const Operator2 rn2 = rn * rn;
    return ((rn * gamma).trace() * rn2.trace() - (rn2 * gamma).trace()).real();
}

double purity_rate_factorized(const Operator2& rho, const Operator2& gamma) {
    const Operator2 rn = normalized(rho);
    return determinant(rn) * (real_trace(gamma) - 2.0 * (rn * gamma).trace().real());
}

ObservableRecord observe(const Operator2& rho_normalized, double raw_trace, double t,
                         const Operator2& h_plus, const Operator2& gamma, double omega) {
    ObservableRecord r;
    r.t = t;
    const auto s = spin_averages(rho_normalized);
    r.sx = s.sx;
    r.sy = s.sy;
    r.sz = s.sz;
    r.trace = raw_trace;
    r.det_norm = determinant(rho_normalized);
    r.det_raw = r.det_norm * raw_trace * raw_trace;
    r.purity = real_trace(rho_normalized * rho_normalized);
    r.energy_avg = real_average(rho_normalized, h_plus) / omega;
    r.gamma_avg = real_average(rho_normalized, gamma) / omega;
    r.bloch_norm_sq = s.sx * s.sx + s.sy * s.sy + s.sz * s.sz;
    return r;
}

double determinant_law_check(const StateTrajectory& traj, const Operator2& gamma) {
    if (traj.raw_states.empty())
        throw FormMismatch("determinant law check needs a LinearRaw trajectory");
    const double det0 = determinant(traj.raw_states.front());
    const double t0 = traj.times.front();
    const double tr_gamma = real_trace(gamma);
    double worst = 0.0;
    for (std::size_t k = 0; k < traj.raw_states.size(); ++k) {
        const double ref = det0 * std::exp(-2.0 * (traj.times[k] - t0) * tr_gamma);
        const double err = std::abs(determinant(traj.raw_states[k]) - ref) /
                           std::max(std::abs(ref), 1e-14);
        worst = std::max(worst, err);
    }
    return worst;
}

}  // namespace nhtls
