// output.hpp: CSV and JSON trajectory files.
#pragma once

#include "nhtls/app/config.hpp"
#include "nhtls/propagator.hpp"

#include <array>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace nhtls::app {

inline constexpr std::size_t kColumnCount = 17;
using Row = std::array<double, kColumnCount>;

const std::array<std::string_view, kColumnCount>& trajectory_columns();

// One row per recorded step, normalized rho entries.
Row trajectory_row(const StateTrajectory& traj, std::size_t k);

// %.17g so that values survive a text round trip.
std::string format_double(double v);

void write_csv(std::ostream& os, const StateTrajectory& traj);

// {"config": {...}, "records": [{column: value, ...}, ...]}
std::string trajectory_json(const ScenarioConfig& cfg, const HamiltonianSpec& spec,
                            const IntegratorConfig& integrator, const StateTrajectory& traj);

// Records of a trajectory_json document, in column order.
std::vector<Row> parse_json_records(std::string_view text);

// Writes text to path; throws std::runtime_error when the file cannot be opened.
void write_file(const std::string& path, std::string_view text);

}  // namespace nhtls::app
