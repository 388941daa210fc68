#include "nhtls/app/output.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace nhtls::app {

const std::array<std::string_view, kColumnCount>& trajectory_columns() {
    static const std::array<std::string_view, kColumnCount> cols = {
        "t",        "rho11_re", "rho11_im", "rho12_re", "rho12_im", "rho21_re",
        "rho21_im", "rho22_re", "rho22_im", "trace_raw", "sx",      "sy",
        "sz",       "purity",   "det_norm", "energy_avg", "gamma_avg"};
    return cols;
}

Row trajectory_row(const StateTrajectory& traj, std::size_t k) {
    const Operator2& r = traj.normalized_states[k];
    const ObservableRecord& o = traj.observables[k];
    return {traj.times[k], r(0, 0).real(), r(0, 0).imag(), r(0, 1).real(), r(0, 1).imag(),
            r(1, 0).real(), r(1, 0).imag(), r(1, 1).real(), r(1, 1).imag(), o.trace,
            o.sx,           o.sy,           o.sz,           o.purity,       o.det_norm,
            o.energy_avg,   o.gamma_avg};
}

std::string format_double(double v) { return fmt::format("{:.17g}", v); }

void write_csv(std::ostream& os, const StateTrajectory& traj) {
    const auto& cols = trajectory_columns();
    for (std::size_t c = 0; c < kColumnCount; ++c) os << (c ? "," : "") << cols[c];
    os << '\n';
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const Row row = trajectory_row(traj, k);
        for (std::size_t c = 0; c < kColumnCount; ++c) os << (c ? "," : "") << format_double(row[c]);
        os << '\n';
    }
}

std::string trajectory_json(const ScenarioConfig& cfg, const HamiltonianSpec& spec,
                            const IntegratorConfig& integrator, const StateTrajectory& traj) {
    nlohmann::json header = {
        {"scenario", std::string(to_string(spec.scenario))},
        {"omega", spec.omega},
        {"gamma", spec.gamma},
        {"beta", spec.beta},
        {"a2", spec.a2},
        {"a0", spec.gauge()},
        {"w_sign", spec.w_sign},
        {"W", w_parameter(spec)},
        {"p", cfg.p},
        {"initial", initial_name(cfg)},
        {"dt", integrator.dt},
        {"t_max", integrator.t_max},
        {"method", "rk4"},
        {"form", std::string(to_string(integrator.form))},
        {"record_every", integrator.record_every},
    };
    nlohmann::json records = nlohmann::json::array();
    const auto& cols = trajectory_columns();
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const Row row = trajectory_row(traj, k);
        nlohmann::json rec = nlohmann::json::object();
        for (std::size_t c = 0; c < kColumnCount; ++c) rec[std::string(cols[c])] = row[c];
        records.push_back(std::move(rec));
    }
    nlohmann::json doc = {{"config", header}, {"records", records}};
    return doc.dump(1) + "\n";
}

std::vector<Row> parse_json_records(std::string_view text) {
    const auto doc = nlohmann::json::parse(text);
    std::vector<Row> rows;
    const auto& cols = trajectory_columns();
    for (const auto& rec : doc.at("records")) {
        Row row{};
        for (std::size_t c = 0; c < kColumnCount; ++c) row[c] = rec.at(std::string(cols[c])).get<double>();
        rows.push_back(row);
    }
    return rows;
}

void write_file(const std::string& path, std::string_view text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    f << text;
}

}  // namespace nhtls::app
