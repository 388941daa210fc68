#include "nhtls/app/cli.hpp"

#include "nhtls/app/config.hpp"
#include "nhtls/app/runner.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace nhtls::app {

namespace {

std::vector<std::string> scenario_names() {
    std::vector<std::string> names;
    for (auto k : {ScenarioKind::General, ScenarioKind::ConservedEnergyExp,
                   ScenarioKind::ConservedEnergyPoly, ScenarioKind::VanishingPopulation,
                   ScenarioKind::Dephasing, ScenarioKind::Purification})
        names.emplace_back(to_string(k));
    return names;
}

}  // namespace

int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Non-Hermitian two-level system simulator"};
    app.require_subcommand(1);
    app.set_config("--config", "", "flat key = value file; command-line flags take precedence");

    ScenarioConfig cfg;
    double a0 = 0.0;
    double t_max = 0.0;
    std::string form = "normalized";
    std::string preset_name;
    SweepAxis axis;

    std::string scenario = "general";
    app.add_option("--scenario", scenario, "scenario name")->check(CLI::IsMember(scenario_names()));
    app.add_option("--omega", cfg.omega, "tunneling frequency Omega");
    app.add_option("--gamma", cfg.gamma);
    app.add_option("--beta", cfg.beta);
    app.add_option("--a2", cfg.a2);
    auto* a0_opt = app.add_option("--a0", a0, "gauge; defaults to gamma");
    app.add_option("--w-sign", cfg.w_sign, "sign of the root W")->check(CLI::IsMember({-1, 1}));
    app.add_option("--p", cfg.p, "ground-state weight of diag_mixed");
    app.add_option("--initial", cfg.initial,
                   "excited | ground | plus_coherent | diag_mixed | explicit:a,b_re,b_im,d");
    app.add_option("--dt", cfg.integrator.dt, "RK4 step in units of 1/Omega");
    auto* t_max_opt = app.add_option("--t-max", t_max, "end time in units of 1/Omega");
    app.add_option("--form", form, "linear | normalized | statevector")
        ->check(CLI::IsMember({"linear", "normalized", "statevector"}));
    app.add_option("--record-every", cfg.integrator.record_every, "record every n-th step");
    app.add_option("--out-csv", cfg.csv_path);
    app.add_option("--out-json", cfg.json_path);
    app.add_flag("--verify", cfg.verify, "check against closed forms and invariants");
    app.add_option("--preset", preset_name, "fig1 | fig2 | fig3")
        ->check(CLI::IsMember({"fig1", "fig2", "fig3"}));
    app.add_option("--sweep-param", axis.param, "omega | gamma | beta | a2 | a0 | p");
    app.add_option("--sweep-start", axis.start);
    app.add_option("--sweep-stop", axis.stop);
    app.add_option("--sweep-count", axis.count)->check(CLI::PositiveNumber);

    auto* run_cmd = app.add_subcommand("run", "propagate and write the trajectory");
    auto* verify_cmd = app.add_subcommand("verify", "run with verification");
    auto* sweep_cmd = app.add_subcommand("sweep", "one summary row per grid point");
    auto* preset_cmd = app.add_subcommand("preset", "multi-curve figure datasets");
    for (auto* sub : {run_cmd, verify_cmd, sweep_cmd, preset_cmd}) sub->fallthrough();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kExitOk : kExitConstraint;
    }

    if (a0_opt->count() > 0) cfg.a0 = a0;
    if (t_max_opt->count() > 0) {
        cfg.integrator.t_max = t_max;
        cfg.t_max_given = true;
    }
    cfg.scenario = *scenario_from_string(scenario);
    cfg.integrator.form = *form_from_string(form);
    if (!axis.param.empty()) cfg.sweep = axis;

    if (*verify_cmd) cfg.verify = true;
    if (*run_cmd || *verify_cmd) return run(cfg, out, err);
    if (*sweep_cmd) return sweep(cfg, out, err);
    if (preset_name.empty()) {
        err << "preset needs --preset fig1|fig2|fig3\n";
        return kExitConstraint;
    }
    return preset(preset_name, cfg, out, err);
}

int main(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return main(args, std::cout, std::cerr);
}

}  // namespace nhtls::app
