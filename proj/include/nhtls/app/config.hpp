// config.hpp: resolved run configuration shared by the CLI subcommands.
#pragma once

#include "nhtls/model.hpp"
#include "nhtls/operator.hpp"
#include "nhtls/propagator.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace nhtls::app {

struct SweepAxis {
    std::string param;  // omega, gamma, beta, a2, a0 or p
    double start = 0.0;
    double stop = 0.0;
    int count = 0;

    double value(int index) const;
};

struct ScenarioConfig {
    ScenarioKind scenario = ScenarioKind::General;
    double omega = 1.0;
    double gamma = 0.0;
    double beta = 0.0;
    double a2 = 0.0;
    std::optional<double> a0;
    int w_sign = +1;
    double p = 0.5;

    // excited | ground | plus_coherent | diag_mixed | explicit:a,b_re,b_im,d
    // (explicit gives [[a, b], [conj b, d]]). Empty selects the scenario's
    // paired state, the one its closed form is written for.
    std::string initial;

    // dt and t_max here count units of 1/Omega (dt = 0.002 means 0.002/Omega);
    // resolve_integrator turns them into times.
    IntegratorConfig integrator;
    bool t_max_given = false;

    std::string csv_path;
    std::string json_path;
    bool verify = false;
    std::optional<SweepAxis> sweep;
};

std::string_view paired_initial(ScenarioKind kind);
std::string initial_name(const ScenarioConfig& cfg);

std::string_view to_string(Form form);
std::optional<Form> form_from_string(std::string_view name);

// Parameters as given, before scenario resolution.
HamiltonianSpec base_spec(const ScenarioConfig& cfg);

// build_scenario on base_spec; throws ConstraintViolation.
HamiltonianSpec resolve_spec(const ScenarioConfig& cfg);

// Throws ConstraintViolation for diag_mixed with p outside (0, 1) or a
// malformed explicit state; std::invalid_argument for an unknown name.
DensityState make_initial_state(const ScenarioConfig& cfg);

// Long enough for the slowest closed-form transient to decay by e^-20,
// at least 10/Omega and at most 2000/Omega.
double default_t_max(const HamiltonianSpec& spec);

// cfg.integrator scaled by 1/Omega, with t_max filled in when it was not given.
IntegratorConfig resolve_integrator(const ScenarioConfig& cfg, const HamiltonianSpec& spec);

// Sets a sweepable parameter by name; throws std::invalid_argument otherwise.
void set_parameter(ScenarioConfig& cfg, std::string_view name, double value);

}  // namespace nhtls::app
