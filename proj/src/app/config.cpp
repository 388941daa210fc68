#include "nhtls/app/config.hpp"

#include "nhtls/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace nhtls::app {

double SweepAxis::value(int index) const {
    if (count <= 1) return start;
    return start + (stop - start) * static_cast<double>(index) / static_cast<double>(count - 1);
}

std::string_view paired_initial(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::Dephasing:
            return "plus_coherent";
        case ScenarioKind::Purification:
            return "diag_mixed";
        default:
            return "excited";
    }
}

std::string initial_name(const ScenarioConfig& cfg) {
    return cfg.initial.empty() ? std::string(paired_initial(cfg.scenario)) : cfg.initial;
}

std::string_view to_string(Form form) {
    switch (form) {
        case Form::LinearRaw:
            return "linear";
        case Form::NonlinearNormalized:
            return "normalized";
        case Form::StateVector:
            return "statevector";
    }
    return "normalized";
}

std::optional<Form> form_from_string(std::string_view name) {
    for (Form f : {Form::LinearRaw, Form::NonlinearNormalized, Form::StateVector})
        if (to_string(f) == name) return f;
    return std::nullopt;
}

HamiltonianSpec base_spec(const ScenarioConfig& cfg) {
    HamiltonianSpec s;
    s.omega = cfg.omega;
    s.gamma = cfg.gamma;
    s.beta = cfg.beta;
    s.a2 = cfg.a2;
    s.a0 = cfg.a0;
    s.w_sign = cfg.w_sign;
    s.scenario = cfg.scenario;
    return s;
}

HamiltonianSpec resolve_spec(const ScenarioConfig& cfg) {
    return build_scenario({cfg.scenario, cfg.p}, base_spec(cfg));
}

namespace {

Operator2 explicit_state(std::string_view body) {
    std::vector<double> v;
    std::stringstream ss{std::string(body)};
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            v.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConstraintViolation("explicit initial state: cannot parse '" + item + "'");
        }
    }
    if (v.size() != 4)
        throw ConstraintViolation("explicit initial state needs a,b_re,b_im,d");
    const Complex b(v[1], v[2]);
    Operator2 rho;
    rho << v[0], b, std::conj(b), v[3];
    if (!(v[0] + v[3] > kTraceFloor))
        throw ConstraintViolation("explicit initial state needs a positive trace");
    return rho;
}

}  // namespace

DensityState make_initial_state(const ScenarioConfig& cfg) {
    const std::string name = initial_name(cfg);
    if (name == "excited") return {excited_state(), 0.0};
    if (name == "ground") return {ground_state(), 0.0};
    if (name == "plus_coherent") return {plus_coherent_state(), 0.0};
    if (name == "diag_mixed") {
        if (!(cfg.p > 0.0 && cfg.p < 1.0)) {
            std::ostringstream msg;
            msg << "diag_mixed initial state needs 0 < p < 1, got p = " << cfg.p;
            throw ConstraintViolation(msg.str());
        }
        return {diag_mixed_state(cfg.p), 0.0};
    }
    constexpr std::string_view prefix = "explicit:";
    if (name.rfind(prefix, 0) == 0) return {explicit_state(std::string_view(name).substr(prefix.size())), 0.0};
    throw std::invalid_argument("unknown initial state '" + name + "'");
}

double default_t_max(const HamiltonianSpec& spec) {
    double rate = std::abs(spec.decay_rate());
    if (spec.scenario == ScenarioKind::ConservedEnergyExp) rate = std::abs(2.0 * spec.a2 * spec.omega);
    double t = 10.0 / spec.omega;
    if (rate > 0.0) t = std::max(t, 20.0 / rate);
    return std::min(t, 2000.0 / spec.omega);
}

IntegratorConfig resolve_integrator(const ScenarioConfig& cfg, const HamiltonianSpec& spec) {
    IntegratorConfig ic = cfg.integrator;
    ic.dt = cfg.integrator.dt / spec.omega;
    ic.t_max = cfg.t_max_given ? cfg.integrator.t_max / spec.omega : default_t_max(spec);
    return ic;
}

void set_parameter(ScenarioConfig& cfg, std::string_view name, double value) {
    if (name == "omega") cfg.omega = value;
    else if (name == "gamma") cfg.gamma = value;
    else if (name == "beta") cfg.beta = value;
    else if (name == "a2") cfg.a2 = value;
    else if (name == "a0") cfg.a0 = value;
    else if (name == "p") cfg.p = value;
    else throw std::invalid_argument("parameter '" + std::string(name) + "' cannot be swept");
}

}  // namespace nhtls::app
