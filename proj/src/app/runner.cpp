#include "nhtls/app/runner.hpp"

#include "nhtls/analytic.hpp"
#include "nhtls/app/output.hpp"
#include "nhtls/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace nhtls::app {

namespace {

constexpr double kSettledDecades = 20.0;  // rate * t_max needed before a limit is compared
constexpr double kConditioningFloor = 1e-6;  // det rho' below this: determinant law not resolvable

double max_abs_diff(const Operator2& a, const Operator2& b) { return (a - b).cwiseAbs().maxCoeff(); }

Operator2 normalize(const Operator2& rho) { return rho / rho.trace(); }

bool is_pure(const Operator2& rho) { return std::abs(determinant(normalize(rho))) <= 1e-12; }

}  // namespace

Simulation simulate(const ScenarioConfig& cfg) {
    Simulation sim;
    sim.spec = resolve_spec(cfg);
    sim.integrator = resolve_integrator(cfg, sim.spec);
    sim.initial = make_initial_state(cfg);
    sim.trajectory = propagate(sim.spec, sim.initial, sim.integrator);
    return sim;
}

bool VerificationReport::passed() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const Check& c) { return c.skipped || c.passed; });
}

std::optional<Operator2> oracle_state(const ScenarioConfig& cfg, const HamiltonianSpec& spec,
                                      double t) {
    const std::string init = initial_name(cfg);
    const double g = spec.gamma;
    const double b = spec.beta;
    const bool general_ok = b * b + g * g >= kDenominatorFloor;
    switch (spec.scenario) {
        case ScenarioKind::ConservedEnergyExp:
            if (init == "excited") return normalize(exp_decay_solution(spec.a2, g, spec.omega, t).rho);
            return std::nullopt;
        case ScenarioKind::ConservedEnergyPoly:
            if (init == "excited") return normalize(poly_decay_solution(g, spec.omega, t).rho);
            return std::nullopt;
        case ScenarioKind::VanishingPopulation:
            if (init == "excited" && general_ok)
                return normalize(vanishing_population_solution(b, g, spec.omega, t).rho);
            return std::nullopt;
        case ScenarioKind::Dephasing:
            if (init == "plus_coherent" && g != 0.0)
                return normalize(dephasing_solution(g, spec.omega, t).rho);
            break;
        case ScenarioKind::Purification:
            if (init == "diag_mixed")
                return normalize(purification_solution(cfg.p, spec.a2, g, spec.gauge(), spec.omega, t,
                                                       spec.w_sign));
            break;
        case ScenarioKind::General:
            break;
    }
    // Every remaining scenario is a member of the general family.
    if (init == "excited" && general_ok) return normalize(general_rho(spec, t));
    return std::nullopt;
}

std::optional<Asymptote> oracle_asymptote(const ScenarioConfig& cfg, const HamiltonianSpec& spec) {
    const std::string init = initial_name(cfg);
    const double g = spec.gamma;
    const double rate = std::abs(spec.decay_rate());
    try {
        switch (spec.scenario) {
            case ScenarioKind::ConservedEnergyExp:
                if (init != "excited") return std::nullopt;
                return Asymptote{exp_decay_asymptote(spec.a2), std::abs(2.0 * spec.a2 * spec.omega)};
            case ScenarioKind::ConservedEnergyPoly:
                return std::nullopt;  // algebraic approach, never settles
            case ScenarioKind::Dephasing:
                if (init != "plus_coherent" || g <= 0.0) return std::nullopt;
                return Asymptote{{0.0, 0.0, -1.0}, rate};
            case ScenarioKind::Purification: {
                if (init != "diag_mixed" || g <= 0.0) return std::nullopt;
                if (purification_branch(cfg.p, spec.a2, g, spec.w_sign) !=
                    PurificationBranch::AsymptoticallyPure)
                    return std::nullopt;
                return Asymptote{spin_averages(purification_limit(cfg.p, spec.a2, g, spec.w_sign)), rate};
            }
            case ScenarioKind::General:
            case ScenarioKind::VanishingPopulation:
                if (init != "excited" || g == 0.0) return std::nullopt;
                return Asymptote{asymptotic_averages(spec), rate};
        }
    } catch (const DegenerateParameters&) {
        return std::nullopt;
    }
    return std::nullopt;
}

VerificationReport verify(const ScenarioConfig& cfg, const Simulation& sim) {
    VerificationReport report;
    const StateTrajectory& traj = sim.trajectory;
    const HamiltonianSpec& spec = sim.spec;

    {
        Check c{"oracle_max_abs_deviation", false, true, 0.0, kOracleTol, ""};
        if (oracle_state(cfg, spec, 0.0)) {
            for (std::size_t k = 0; k < traj.size(); ++k)
                c.value = std::max(c.value, max_abs_diff(traj.normalized_states[k],
                                                         *oracle_state(cfg, spec, traj.times[k])));
            c.passed = c.value <= c.tolerance;
        } else {
            c.skipped = true;
            c.note = "no closed form for this scenario and initial state";
        }
        report.checks.push_back(c);
    }
    {
        Check c{"bloch_identity", false, true, 0.0, kInvariantTol, ""};
        for (const auto& o : traj.observables)
            c.value = std::max(c.value, std::abs(o.sx * o.sx + o.sy * o.sy + o.sz * o.sz -
                                                 (1.0 - 4.0 * o.det_norm)));
        c.passed = c.value <= c.tolerance;
        report.checks.push_back(c);
    }
    const bool pure = is_pure(sim.initial.rho);
    {
        Check c{"purity_conservation", false, true, 0.0, kInvariantTol, ""};
        if (pure) {
            for (const auto& o : traj.observables) c.value = std::max(c.value, std::abs(o.purity - 1.0));
            c.passed = c.value <= c.tolerance;
        } else {
            c.skipped = true;
            c.note = "mixed initial state";
        }
        report.checks.push_back(c);
    }
    {
        Check c{"determinant_law", false, true, 0.0, kDeterminantTol, ""};
        if (pure) {
            c.tolerance = 1e-10;
            for (const auto& o : traj.observables) c.value = std::max(c.value, std::abs(o.det_norm));
            c.passed = c.value <= c.tolerance;
            c.note = "pure initial state: max |det rho'|";
        } else {
            const double tr_gamma = real_trace(build_decay_operator(spec));
            const double det0 = traj.observables.front().det_raw;
            std::size_t excluded = 0;
            for (std::size_t k = 0; k < traj.size(); ++k) {
                const auto& o = traj.observables[k];
                if (std::abs(o.det_norm) < kConditioningFloor) {
                    ++excluded;
                    continue;
                }
                const double ref = det0 * std::exp(-2.0 * traj.times[k] * tr_gamma);
                c.value = std::max(c.value, std::abs(o.det_raw - ref) / std::abs(ref));
            }
            c.passed = c.value <= c.tolerance;
            if (excluded) {
                std::ostringstream msg;
                msg << excluded << " steps with det rho' < " << kConditioningFloor << " not compared";
                c.note = msg.str();
            }
        }
        report.checks.push_back(c);
    }
    {
        Check c{"asymptote", false, true, 0.0, kAsymptoteTol, ""};
        const auto limit = oracle_asymptote(cfg, spec);
        if (!limit) {
            c.skipped = true;
            c.note = "no closed-form limit for this scenario and initial state";
        } else if (limit->rate * sim.integrator.t_max < kSettledDecades) {
            c.skipped = true;
            c.note = "t_max too short for the limit to be reached";
        } else {
            const SpinAverages m = long_time_averages(traj);
            c.value = std::max({std::abs(m.sx - limit->value.sx), std::abs(m.sy - limit->value.sy),
                                std::abs(m.sz - limit->value.sz)});
            c.passed = c.value <= c.tolerance;
        }
        report.checks.push_back(c);
    }
    return report;
}

void print_report(std::ostream& os, const VerificationReport& report) {
    for (const auto& c : report.checks) {
        os << (c.skipped ? "SKIP" : (c.passed ? "PASS" : "FAIL")) << ' ' << c.name;
        if (!c.skipped) os << " value=" << format_double(c.value) << " tol=" << c.tolerance;
        if (!c.note.empty()) os << " (" << c.note << ")";
        os << '\n';
    }
}

int report_exception(std::ostream& err) {
    try {
        throw;
    } catch (const NumericFailure& e) {
        err << "numeric failure: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const ConstraintViolation& e) {
        err << "constraint violation: " << e.what() << '\n';
    } catch (const DegenerateParameters& e) {
        err << "degenerate parameters: " << e.what() << '\n';
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
    }
    return kExitConstraint;
}

int run(const ScenarioConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        const Simulation sim = simulate(cfg);
        if (!cfg.csv_path.empty()) {
            std::ostringstream csv;
            write_csv(csv, sim.trajectory);
            write_file(cfg.csv_path, csv.str());
        }
        if (!cfg.json_path.empty())
            write_file(cfg.json_path, trajectory_json(cfg, sim.spec, sim.integrator, sim.trajectory));
        // With the trajectory on stdout, the summary goes to stderr.
        const bool csv_to_stdout = cfg.csv_path.empty() && cfg.json_path.empty() && !cfg.verify;
        if (csv_to_stdout) write_csv(out, sim.trajectory);
        std::ostream& info = csv_to_stdout ? err : out;

        const auto& last = sim.trajectory.observables.back();
        info << "final t=" << format_double(last.t) << " sx=" << format_double(last.sx)
            << " sy=" << format_double(last.sy) << " sz=" << format_double(last.sz) << '\n';
        if (!cfg.verify) return kExitOk;

        const VerificationReport report = verify(cfg, sim);
        print_report(info, report);
        return report.passed() ? kExitOk : kExitVerify;
    } catch (...) {
        return report_exception(err);
    }
}

namespace {

std::string failure_status() {
    try {
        throw;
    } catch (const ConstraintViolation&) {
        return "ConstraintViolation";
    } catch (const DegenerateParameters&) {
        return "DegenerateParameters";
    } catch (const TraceCollapse&) {
        return "TraceCollapse";
    } catch (const HermiticityDrift&) {
        return "HermiticityDrift";
    } catch (const Overflow&) {
        return "Overflow";
    } catch (...) {
        return "Error";
    }
}

SweepRow sweep_point(const ScenarioConfig& base, int index) {
    SweepRow row;
    row.index = index;
    row.value = base.sweep->value(index);
    try {
        ScenarioConfig cfg = base;
        set_parameter(cfg, base.sweep->param, row.value);
        const Simulation sim = simulate(cfg);
        row.asymptote = long_time_averages(sim.trajectory);
        if (sim.spec.scenario == ScenarioKind::Purification)
            row.branch = purification_branch(cfg.p, sim.spec.a2, sim.spec.gamma, sim.spec.w_sign) ==
                                 PurificationBranch::AsymptoticallyPure
                             ? "AsymptoticallyPure"
                             : "AsymptoticallyMixed";
    } catch (const std::exception& e) {
        row.status = failure_status();
        row.message = e.what();
    }
    return row;
}

}  // namespace

std::vector<SweepRow> sweep_rows(const ScenarioConfig& cfg) {
    if (!cfg.sweep) throw std::invalid_argument("sweep needs --sweep-param and --sweep-count");
    const SweepAxis& axis = *cfg.sweep;
    if (axis.count < 1) throw std::invalid_argument("sweep count must be >= 1");
    ScenarioConfig probe = cfg;
    set_parameter(probe, axis.param, axis.start);  // rejects unknown names up front

    std::vector<SweepRow> rows(static_cast<std::size_t>(axis.count));
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int i = next++; i < axis.count; i = next++) rows[static_cast<std::size_t>(i)] = sweep_point(cfg, i);
    };
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned n = std::min<unsigned>(hw, static_cast<unsigned>(axis.count));
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < n; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return rows;
}

void write_sweep_csv(std::ostream& os, const ScenarioConfig& cfg, const std::vector<SweepRow>& rows) {
    os << "index," << cfg.sweep->param << ",status,sx_inf,sy_inf,sz_inf,branch\n";
    for (const auto& r : rows) {
        os << r.index << ',' << format_double(r.value) << ',' << r.status << ',';
        if (r.status == "ok")
            os << format_double(r.asymptote.sx) << ',' << format_double(r.asymptote.sy) << ','
               << format_double(r.asymptote.sz);
        else
            os << ",,";
        os << ',' << r.branch << '\n';
    }
}

int sweep(const ScenarioConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        const auto rows = sweep_rows(cfg);
        std::ostringstream csv;
        write_sweep_csv(csv, cfg, rows);
        if (cfg.csv_path.empty())
            out << csv.str();
        else
            write_file(cfg.csv_path, csv.str());
        for (const auto& r : rows)
            if (r.status != "ok") err << "point " << r.index << ": " << r.status << ": " << r.message << '\n';
        return kExitOk;
    } catch (...) {
        return report_exception(err);
    }
}

namespace {

double expected_gamma_avg(const HamiltonianSpec& spec, const SpinAverages& s) {
    const auto d = decay_coefficients(spec);
    return d.identity + d.x * s.sx + d.y * s.sy + d.z * s.sz;
}

void anchor(VerificationReport& rep, const std::string& name, double got, double want, double tol) {
    Check c{name, false, true, std::abs(got - want), tol, ""};
    c.passed = c.value <= tol;
    rep.checks.push_back(c);
}

}  // namespace

PresetData preset_data(std::string_view name, const ScenarioConfig& base) {
    PresetData data;
    data.name = std::string(name);
    std::vector<double> params;
    ScenarioConfig cfg = base;
    cfg.initial.clear();
    cfg.a0.reset();
    cfg.w_sign = +1;
    cfg.t_max_given = false;
    if (name == "fig1" || name == "fig2") {
        cfg.scenario = name == "fig1" ? ScenarioKind::General : ScenarioKind::VanishingPopulation;
        cfg.beta = 0.9;
        cfg.a2 = name == "fig1" ? 0.01 : 0.0;
        params = {0.2, 0.5, 1.0};
        data.x_label = "2*beta*Omega*t";
    } else if (name == "fig3") {
        cfg.scenario = ScenarioKind::Dephasing;
        cfg.beta = 0.0;
        cfg.a2 = 0.0;
        params = {4.0, 1.0, 0.2};
        data.x_label = "2*gamma*Omega*t";
    } else {
        throw std::invalid_argument("unknown preset '" + std::string(name) + "' (fig1, fig2, fig3)");
    }

    for (double v : params) {
        PresetCurve curve;
        curve.parameter = v;
        std::ostringstream label;
        if (name == "fig3") {
            cfg.gamma = v;
            label << "gamma=" << v;
        } else {
            cfg.gamma = v * cfg.beta;
            label << "gamma/beta=" << v;
        }
        curve.label = label.str();
        const Simulation sim = simulate(cfg);
        curve.spec = sim.spec;
        const double scale = 2.0 * (name == "fig3" ? sim.spec.gamma : sim.spec.beta) * sim.spec.omega;
        for (const auto& o : sim.trajectory.observables) {
            curve.t.push_back(o.t);
            curve.x.push_back(scale * o.t);
            curve.sz.push_back(o.sz);
            curve.energy_avg.push_back(o.energy_avg);
            curve.minus_gamma_avg.push_back(-o.gamma_avg);
        }

        const SpinAverages s0 = spin_averages(sim.initial.rho);
        const std::string tag = curve.label + " ";
        anchor(data.anchors, tag + "sz(0)", curve.sz.front(), s0.sz, 1e-12);
        anchor(data.anchors, tag + "energy_avg(0)", curve.energy_avg.front(), -s0.sx, 1e-12);
        anchor(data.anchors, tag + "-gamma_avg(0)", curve.minus_gamma_avg.front(),
               -expected_gamma_avg(sim.spec, s0), 1e-12);
        if (const auto limit = oracle_asymptote(cfg, sim.spec)) {
            const SpinAverages m = long_time_averages(sim.trajectory);
            const std::size_t tail = std::max<std::size_t>(1, sim.trajectory.size() / 20);
            double e = 0.0, g = 0.0;
            for (std::size_t k = sim.trajectory.size() - tail; k < sim.trajectory.size(); ++k) {
                e += curve.energy_avg[k];
                g += curve.minus_gamma_avg[k];
            }
            e /= static_cast<double>(tail);
            g /= static_cast<double>(tail);
            anchor(data.anchors, tag + "sz(inf)", m.sz, limit->value.sz, kAsymptoteTol);
            anchor(data.anchors, tag + "energy_avg(inf)", e, -limit->value.sx, kAsymptoteTol);
            anchor(data.anchors, tag + "-gamma_avg(inf)", g,
                   -expected_gamma_avg(sim.spec, limit->value), kAsymptoteTol);
        }
        data.curves.push_back(std::move(curve));
    }
    return data;
}

void write_preset_csv(std::ostream& os, const PresetData& data) {
    os << "curve,parameter,x,t,sz,energy_avg,minus_gamma_avg\n";
    for (std::size_t c = 0; c < data.curves.size(); ++c) {
        const auto& cv = data.curves[c];
        for (std::size_t k = 0; k < cv.t.size(); ++k)
            os << c << ',' << format_double(cv.parameter) << ',' << format_double(cv.x[k]) << ','
               << format_double(cv.t[k]) << ',' << format_double(cv.sz[k]) << ','
               << format_double(cv.energy_avg[k]) << ',' << format_double(cv.minus_gamma_avg[k]) << '\n';
    }
}

int preset(std::string_view name, const ScenarioConfig& base, std::ostream& out, std::ostream& err) {
    try {
        const PresetData data = preset_data(name, base);
        std::ostringstream csv;
        write_preset_csv(csv, data);
        std::ostream& info = base.csv_path.empty() ? err : out;
        if (base.csv_path.empty())
            out << csv.str();
        else
            write_file(base.csv_path, csv.str());
        info << data.name << ": x = " << data.x_label << '\n';
        print_report(info, data.anchors);
        return data.anchors.passed() ? kExitOk : kExitVerify;
    } catch (...) {
        return report_exception(err);
    }
}

}  // namespace nhtls::app
