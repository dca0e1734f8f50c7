#include "egtlab/runner/execute.hpp"
#include "egtlab/runner/spec.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <sstream>
#include <system_error>

#include <unistd.h>

#include "egtlab/rng.hpp"
#include "egtlab/version.hpp"

namespace egt::runner {

namespace {

bool wants(const Json& spec, const char* format) {
  const auto& f = spec.at("output").at("formats");
  return std::find(f.begin(), f.end(), format) != f.end();
}

Json payoff_pair(const Payoff& p) { return Json::array({p.row, p.col}); }

Json mixed_payoff(const MatrixGame& g, const MixedProfile& m) {
  double row = 0.0, col = 0.0;
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j) {
      row += m.row_mix[i] * m.col_mix[j] * g.row_payoff(i, j);
      col += m.row_mix[i] * m.col_mix[j] * g.col_payoff(i, j);
    }
  return Json::array({row, col});
}

std::vector<Artifact> run_nash(const Json& spec) {
  const MatrixGame game = build_game(spec.at("game"));
  Json pure = Json::array();
  for (const auto& p : pure_nash(game))
    pure.push_back(Json{{"row", game.row_labels()[p.row]},
                        {"col", game.col_labels()[p.col]},
                        {"row_index", p.row},
                        {"col_index", p.col},
                        {"payoff", payoff_pair(game.payoff(p.row, p.col))}});
  Json out{{"game", game_to_json(game)}, {"pure_nash", pure}};
  if (spec.at("mixed").get<bool>()) {
    const std::size_t s = spec.at("max_support").get<std::size_t>();
    const MixedNashResult r = mixed_nash(game, s);
    Json eq = Json::array();
    for (const auto& m : r.equilibria)
      eq.push_back(Json{{"row_mix", m.row_mix},
                        {"col_mix", m.col_mix},
                        {"payoff", mixed_payoff(game, m)},
                        {"max_deviation_gain", max_deviation_gain(game, m)}});
    out["mixed_nash"] = Json{{"max_support", s}, {"degenerate", r.degenerate}, {"equilibria", eq}};
  }
  return {{"nash.json", dump_json(out)}};
}

AttractorLibrary vertex_library(const MatrixGame& game) { return AttractorLibrary::vertices(game); }

std::vector<Artifact> run_evolve(const Json& spec) {
  const MatrixGame game = resolve_game(spec);
  const DynamicsConfig config = build_dynamics(spec.at("dynamics"), spec.at("seed").get<std::uint64_t>());
  const PopulationState x0(spec.at("initial").get<std::vector<double>>());
  const ConvergenceResult r = run_to_convergence(game, x0, config);
  const AttractorLibrary lib = vertex_library(game);

  std::vector<Artifact> out;
  if (wants(spec, "csv")) {
    std::ostringstream csv;
    write_trajectory_csv(csv, r.trajectory, game.row_labels());
    out.push_back({"trajectory.csv", csv.str()});
  }
  if (wants(spec, "json")) out.push_back({"trajectory.json", dump_json(trajectory_to_json(r.trajectory, game.row_labels()))});
  out.push_back({"attractor.json", dump_json(attractor_summary_json(r, game.row_labels(), &lib))});
  return out;
}

std::vector<Artifact> run_basins(const Json& spec, unsigned threads) {
  const MatrixGame game = resolve_game(spec);
  const std::uint64_t seed = spec.at("seed").get<std::uint64_t>();
  const DynamicsConfig config = build_dynamics(spec.at("dynamics"), seed);
  const Json& a = spec.at("attractors");
  const double radius = a.at("radius").get<double>();

  AttractorLibrary lib;
  if (a.at("include_vertices").get<bool>()) lib = AttractorLibrary::vertices(game, radius);
  for (const auto& extra : a.at("extra")) {
    if (extra.contains("state")) {
      lib.add(extra.at("label"), PopulationState(extra.at("state").get<std::vector<double>>()), radius);
    } else {
      const auto i = *game.row_index(extra.at("edge")[0].get<std::string>());
      const auto j = *game.row_index(extra.at("edge")[1].get<std::string>());
      lib.add(extra.at("label"), *edge_rest_point(game, i, j), radius);
    }
  }

  const BasinReport report = estimate_basins(game, config, lib, spec.at("samples").get<std::size_t>(), seed, threads);
  std::vector<Artifact> out;
  if (wants(spec, "csv")) {
    std::ostringstream csv;
    write_basin_csv(csv, report);
    out.push_back({"basins.csv", csv.str()});
  }
  if (wants(spec, "json")) {
    Json j = basin_report_to_json(report);
    Json states = Json::array();
    for (const auto& at : lib.attractors())
      states.push_back(Json{{"label", at.label}, {"state", at.state.vector()}, {"radius", at.radius}});
    j["library"] = states;
    j["labels"] = game.row_labels();
    out.push_back({"basins.json", dump_json(j)});
  }
  return out;
}

std::vector<Artifact> run_repeated(const Json& spec) {
  const auto roster = build_roster(spec.at("roster"));
  const RepeatedGameParams params = build_params(spec.at("repeated"));
  const std::uint64_t seed = spec.at("seed").get<std::uint64_t>();
  const bool mc = spec.at("monte_carlo").get<bool>();

  Json matches = Json::array();
  std::uint64_t pair = 0;
  for (std::size_t i = 0; i < roster.size(); ++i) {
    for (std::size_t j = i; j < roster.size(); ++j, ++pair) {
      Json m{{"a", roster[i].name()}, {"b", roster[j].name()},
             {"analytic", match_outcome_to_json(long_run_payoff(roster[i], roster[j], params))}};
      if (mc) {
        const std::uint64_t s = Rng::stream(seed, pair).next();
        m["monte_carlo"] = empirical_outcome_to_json(simulate_match(roster[i], roster[j], params, s));
        m["monte_carlo"]["seed"] = s;
      }
      matches.push_back(std::move(m));
    }
  }
  Json out{{"params", spec.at("repeated")},
           {"induced_game", game_to_json(induced_matrix(roster, params))},
           {"matches", std::move(matches)}};

  auto find = [&](const Json& name) -> const StrategyAutomaton& {
    return *std::find_if(roster.begin(), roster.end(), [&](const auto& a) { return a.name() == name; });
  };
  if (spec.contains("deterrence")) {
    const Json& d = spec.at("deterrence");
    const auto grid = d.at("k_grid").get<std::vector<double>>();
    const DeterrenceResult r = deterrence_threshold(params, find(d.at("incumbent")), find(d.at("invader")), grid);
    Json margins = Json::array();
    for (std::size_t g = 0; g < grid.size(); ++g)
      margins.push_back(Json{{"k", grid[g]}, {"incumbent", r.margins[g].first}, {"invader", r.margins[g].second}});
    out["deterrence"] = Json{{"incumbent", d.at("incumbent")},
                             {"invader", d.at("invader")},
                             {"threshold", r.threshold ? Json(*r.threshold) : Json(nullptr)},
                             {"margins", margins}};
  }

  std::vector<Artifact> files{{"repeated.json", dump_json(out)}};
  if (spec.contains("trace")) {
    const Json& t = spec.at("trace");
    RepeatedGameParams p = params;
    p.horizon = t.at("rounds").get<std::uint64_t>();
    std::ostringstream csv;
    csv << kTraceCsvHeader << '\n';
    simulate_match(find(t.at("a")), find(t.at("b")), p, Rng::stream(seed, pair).next(),
                   [&](const TraceRow& row) { csv << trace_csv_row(row) << '\n'; });
    files.push_back({"trace.csv", csv.str()});
  }
  return files;
}

std::vector<Artifact> run_sweep(const Json& spec, unsigned threads) {
  std::vector<SweepPoint> grid;
  for (double k : spec.at("grid").at("apology_cost").get<std::vector<double>>())
    for (double r : spec.at("grid").at("reliability").get<std::vector<double>>()) grid.push_back({k, r});
  const std::uint64_t seed = spec.at("seed").get<std::uint64_t>();
  const auto rows = basin_sweep(grid, build_params(spec.at("repeated")), build_roster(spec.at("roster")),
                                build_dynamics(spec.at("dynamics"), seed), spec.at("samples").get<std::size_t>(),
                                seed, threads, spec.at("radius").get<double>());
  std::vector<Artifact> out;
  if (wants(spec, "csv")) {
    std::ostringstream csv;
    write_sweep_csv(csv, rows);
    out.push_back({"sweep.csv", csv.str()});
  }
  if (wants(spec, "json")) {
    Json j = Json::array();
    for (const auto& r : rows)
      j.push_back(Json{{"k", r.apology_cost},
                       {"r", r.reliability},
                       {"attractor_label", r.label},
                       {"fraction", r.fraction},
                       {"ci95", Json::array({r.ci.low, r.ci.high})},
                       {"samples", r.samples},
                       {"seed", r.seed}});
    out.push_back({"sweep.json", dump_json(Json{{"rows", j}})});
  }
  return out;
}

std::vector<Artifact> run_spatial(const Json& spec) {
  const Topology topology = topology_from_json(spec.at("topology"));
  const MatrixGame game = build_game(spec.at("game"));
  const SpatialConfig config(topology, game);
  const SpatialState initial{spec.at("initial").get<std::vector<std::size_t>>(), 0};
  const SpatialRun run = spatial_run(initial, config, spec.at("max_generations").get<std::uint64_t>());

  std::vector<Artifact> out;
  if (wants(spec, "csv")) {
    std::ostringstream csv;
    write_frequency_csv(csv, run, game.row_labels());
    out.push_back({"frequencies.csv", csv.str()});
  }
  Json state = spatial_state_to_json(topology, game.name(), run.terminal);
  state["game"] = spec.at("game");
  out.push_back({"terminal.json", dump_json(Json{{"stop", std::string(to_string(run.stop))},
                                                 {"generations", run.terminal.generation},
                                                 {"labels", game.row_labels()},
                                                 {"initial_frequencies", run.frequencies.front()},
                                                 {"terminal_frequencies", run.frequencies.back()},
                                                 {"state", state}})});
  if (spec.at("grid_dump").get<bool>()) {
    if (const auto* grid = std::get_if<GridTopology>(&topology)) {
      std::string dump;
      SpatialState s = initial;
      for (;;) {
        dump += "# generation " + std::to_string(s.generation) + "\n" + grid_dump(s, *grid) + "\n";
        if (s.generation == run.terminal.generation) break;
        s = spatial_step(s, config);
      }
      out.push_back({"grid.txt", dump});
    }
  }
  return out;
}

}  // namespace

std::vector<Artifact> produce(const Json& spec, unsigned threads) {
  const std::string kind = spec.at("experiment").get<std::string>();
  if (kind == "nash") return run_nash(spec);
  if (kind == "evolve") return run_evolve(spec);
  if (kind == "basins") return run_basins(spec, threads);
  if (kind == "repeated") return run_repeated(spec);
  if (kind == "sweep") return run_sweep(spec, threads);
  if (kind == "spatial") return run_spatial(spec);
  throw std::invalid_argument("unknown experiment '" + kind + "'");
}

void write_atomic(const std::filesystem::path& path, std::string_view contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot create '" + tmp.string() + "'");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) {
      out.close();
      std::filesystem::remove(tmp);
      throw std::runtime_error("failed writing '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot move output into place at '" + path.string() + "': " + ec.message());
  }
}

RunResult execute(const Json& spec, const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<Artifact> artifacts = produce(spec, options.threads);

  RunResult result;
  result.out_dir = spec.at("output").at("dir").get<std::string>();
  std::filesystem::create_directories(result.out_dir);
  Json outputs = Json::array();
  for (const auto& a : artifacts) {
    write_atomic(result.out_dir / a.name, a.contents);
    result.files.push_back(a.name);
    outputs.push_back(Json{{"file", a.name}, {"bytes", a.contents.size()}});
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  result.manifest = Json{
      {"schema_version", kSchemaVersion},
      {"generator", Json{{"name", "egtlab"}, {"version", version()}}},
      {"versions",
       Json{{"egtlab", version()},
            {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                  std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                  std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
            {"eigen", eigen_version()},
            {"compiler", compiler_version()}}},
      {"rng", std::string(Rng::kGeneratorId)},
      {"experiment", spec.at("experiment")},
      {"seed", spec.at("seed")},
      {"seed_generated", options.seed_generated},
      {"overrides", options.overrides},
      {"threads", options.threads},
      {"wall_time_seconds", wall},
      {"outputs", outputs},
      {"spec", spec}};
  write_atomic(result.out_dir / "manifest.json", dump_json(result.manifest));
  result.files.push_back("manifest.json");
  return result;
}

}  // namespace egt::runner
