// runner.hpp: the run, verify, sweep and preset actions behind the CLI.
#pragma once

#include "nhtls/app/config.hpp"
#include "nhtls/observables.hpp"
#include "nhtls/propagator.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nhtls::app {

enum ExitCode : int {
    kExitOk = 0,
    kExitConstraint = 1,  // ConstraintViolation, DegenerateParameters, bad configuration
    kExitNumeric = 2,     // TraceCollapse, HermiticityDrift, Overflow
    kExitVerify = 3,
};

struct Simulation {
    HamiltonianSpec spec;
    IntegratorConfig integrator;
    DensityState initial;
    StateTrajectory trajectory;
};

// Resolves the config and propagates; library exceptions pass through.
Simulation simulate(const ScenarioConfig& cfg);

struct Check {
    std::string name;
    bool skipped = false;
    bool passed = true;
    double value = 0.0;
    double tolerance = 0.0;
    std::string note;
};

struct VerificationReport {
    std::vector<Check> checks;
    bool passed() const;
};

inline constexpr double kOracleTol = 1e-6;
inline constexpr double kInvariantTol = 1e-8;
inline constexpr double kDeterminantTol = 1e-6;
inline constexpr double kAsymptoteTol = 1e-3;

// Normalized closed-form rho'(t) when the scenario has one for this initial state.
std::optional<Operator2> oracle_state(const ScenarioConfig& cfg, const HamiltonianSpec& spec,
                                      double t);

// Closed-form t -> infinity spin averages together with the rate at which
// they are approached, when known for this scenario and initial state.
struct Asymptote {
    SpinAverages value;
    double rate = 0.0;
};
std::optional<Asymptote> oracle_asymptote(const ScenarioConfig& cfg, const HamiltonianSpec& spec);

VerificationReport verify(const ScenarioConfig& cfg, const Simulation& sim);

void print_report(std::ostream& os, const VerificationReport& report);

// Maps the exception in flight to an exit code and prints its message.
int report_exception(std::ostream& err);

int run(const ScenarioConfig& cfg, std::ostream& out, std::ostream& err);

struct SweepRow {
    int index = 0;
    double value = 0.0;
    std::string status = "ok";  // ok or the error class name
    SpinAverages asymptote;      // mean over the final 5% of the grid
    std::string branch;          // purification only
    std::string message;
};

// One propagation per grid point, in parallel; rows come back in grid order.
std::vector<SweepRow> sweep_rows(const ScenarioConfig& cfg);

void write_sweep_csv(std::ostream& os, const ScenarioConfig& cfg, const std::vector<SweepRow>& rows);

int sweep(const ScenarioConfig& cfg, std::ostream& out, std::ostream& err);

struct PresetCurve {
    std::string label;  // e.g. gamma/beta=0.5
    double parameter = 0.0;
    HamiltonianSpec spec;
    std::vector<double> x;  // 2 beta Omega t, or 2 gamma Omega t for dephasing
    std::vector<double> t;
    std::vector<double> sz;
    std::vector<double> energy_avg;
    std::vector<double> minus_gamma_avg;
};

struct PresetData {
    std::string name;
    std::string x_label;
    std::vector<PresetCurve> curves;
    VerificationReport anchors;  // t = 0 values and long-time limits
};

// fig1, fig2 or fig3; integrator settings other than t_max come from base.
PresetData preset_data(std::string_view name, const ScenarioConfig& base);

void write_preset_csv(std::ostream& os, const PresetData& data);

int preset(std::string_view name, const ScenarioConfig& base, std::ostream& out,
           std::ostream& err);

}  // namespace nhtls::app
