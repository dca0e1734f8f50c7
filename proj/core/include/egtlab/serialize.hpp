#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "egtlab/basins.hpp"
#include "egtlab/dynamics.hpp"
#include "egtlab/games.hpp"
#include "egtlab/repeated.hpp"
#include "egtlab/spatial.hpp"

namespace egt {

using Json = nlohmann::ordered_json;

// Games: {name, row_labels, col_labels, payoffs: [[[u_row, u_col], ...], ...], symmetric}
Json game_to_json(const MatrixGame& game);
MatrixGame game_from_json(const Json& j);

// Automata: {name, initial, states: [{name, intent, apology, acceptance,
//   transitions: {"<own><partner>:<status>": "<state name>", ...}}]}
Json automaton_to_json(const StrategyAutomaton& a);
StrategyAutomaton automaton_from_json(const Json& j);

Json match_outcome_to_json(const MatchOutcome& m);
Json empirical_outcome_to_json(const EmpiricalOutcome& m);

inline constexpr const char* kTraceCsvHeader =
    "round,intentA,intentB,executedA,executedB,apologyA,apologyB,statusA,statusB,payoffA,payoffB";
std::string trace_csv_row(const TraceRow& row);

// Trajectories. CSV: header "time,<label_1>,...,<label_n>", one row per
// recorded point, then a footer record "# terminal,<flag>".
void write_trajectory_csv(std::ostream& out, const Trajectory& t, const std::vector<std::string>& labels);
Json trajectory_to_json(const Trajectory& t, const std::vector<std::string>& labels);
Json attractor_summary_json(const ConvergenceResult& r, const std::vector<std::string>& labels,
                            const AttractorLibrary* library = nullptr);

Json basin_report_to_json(const BasinReport& r);
/// Columns: attractor_label, count, fraction, ci_lo, ci_hi, samples, seed.
void write_basin_csv(std::ostream& out, const BasinReport& r);
/// Columns: k, r, attractor_label, fraction, ci_lo, ci_hi, samples, seed.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

// Spatial fixtures: {topology: {kind: "grid", width, height, neighborhood,
//   wrap} | {kind: "ring", nodes, radius}, game, strategies: [...]}
Json topology_to_json(const Topology& t);
Topology topology_from_json(const Json& j);
Json spatial_state_to_json(const Topology& t, const std::string& game, const SpatialState& s);
SpatialState spatial_state_from_json(const Json& j);
/// Columns: generation, <label_1>, ..., <label_n>.
void write_frequency_csv(std::ostream& out, const SpatialRun& run, const std::vector<std::string>& labels);
/// One line per generation row of the grid, strategies as digits; blank line between generations.
std::string grid_dump(const SpatialState& s, const GridTopology& t);

/// JSON numbers are written with the shortest round-trip representation, so
/// dump() output is byte-stable.
std::string dump_json(const Json& j);

}  // namespace egt
