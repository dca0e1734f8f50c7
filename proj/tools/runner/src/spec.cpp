#include "egtlab/runner/spec.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

namespace egt::runner {

namespace {

using Path = std::string;

std::string field(const Path& prefix, std::string_view key) {
  return prefix.empty() ? std::string(key) : prefix + "." + std::string(key);
}

std::string element(const Path& prefix, std::size_t i) { return prefix + "[" + std::to_string(i) + "]"; }

// Parsed JSON stores 5 as unsigned, but a spec built in code may hold a signed 5.
bool non_negative_integer(const Json& v) {
  return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
}

std::string issues_text(const std::vector<ValidationIssue>& issues) {
  std::string s = "invalid run spec:";
  for (const auto& i : issues) s += " " + i.path + ": " + i.reason + ";";
  return s;
}

class Checker {
 public:
  explicit Checker(const ValidateOptions& options) : options_(options) {}

  std::vector<ValidationIssue> errors;

  void fail(Path path, std::string reason) { errors.push_back({std::move(path), std::move(reason)}); }

  bool is_object(const Json& v, const Path& path) {
    if (v.is_object()) return true;
    fail(path, "must be an object");
    return false;
  }

  void allow_only(const Json& obj, const Path& prefix, std::initializer_list<std::string_view> keys) {
    for (const auto& [key, value] : obj.items())
      if (std::find(keys.begin(), keys.end(), key) == keys.end()) fail(field(prefix, key), "unknown field");
  }

  double number(const Json& obj, const Path& prefix, const char* key, double fallback) {
    if (!obj.contains(key)) return fallback;
    const Json& v = obj.at(key);
    if (!v.is_number() || !std::isfinite(v.get<double>())) {
      fail(field(prefix, key), "must be a finite number");
      return fallback;
    }
    return v.get<double>();
  }

  std::uint64_t integer(const Json& obj, const Path& prefix, const char* key, std::uint64_t fallback) {
    if (!obj.contains(key)) return fallback;
    const Json& v = obj.at(key);
    if (!non_negative_integer(v)) {
      fail(field(prefix, key), "must be a non-negative integer");
      return fallback;
    }
    return v.get<std::uint64_t>();
  }

  bool boolean(const Json& obj, const Path& prefix, const char* key, bool fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj.at(key).is_boolean()) {
      fail(field(prefix, key), "must be true or false");
      return fallback;
    }
    return obj.at(key).get<bool>();
  }

  std::string text(const Json& obj, const Path& prefix, const char* key, std::string fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj.at(key).is_string()) {
      fail(field(prefix, key), "must be a string");
      return fallback;
    }
    return obj.at(key).get<std::string>();
  }

  std::optional<Json> load_file(const Json& ref, const Path& path) {
    if (!ref.at("file").is_string()) {
      fail(field(path, "file"), "must be a string");
      return std::nullopt;
    }
    std::filesystem::path p = ref.at("file").get<std::string>();
    if (p.is_relative()) p = options_.base_dir / p;
    std::ifstream in(p);
    if (!in) {
      fail(field(path, "file"), "cannot open '" + p.string() + "'");
      return std::nullopt;
    }
    try {
      return Json::parse(in);
    } catch (const std::exception& e) {
      fail(field(path, "file"), "'" + p.string() + "' is not valid JSON: " + e.what());
      return std::nullopt;
    }
  }

 private:
  const ValidateOptions& options_;
};

// Checks one numeric field and writes it into `out`.
struct Range {
  double lo, hi;
  bool lo_open, hi_open;
  const char* text;
  bool contains(double v) const {
    return (lo_open ? v > lo : v >= lo) && (hi_open ? v < hi : v <= hi);
  }
};

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr Range kUnit{0.0, 1.0, false, false, "must lie in [0,1]"};
constexpr Range kUnitHalfOpen{0.0, 1.0, false, true, "must lie in [0,1)"};
constexpr Range kUnitOpenClosed{0.0, 1.0, true, false, "must lie in (0,1]"};
constexpr Range kUnitOpen{0.0, 1.0, true, true, "must lie in (0,1)"};
constexpr Range kPositive{0.0, kInf, true, true, "must be positive"};
constexpr Range kNonNegative{0.0, kInf, false, true, "must be >= 0"};

double put_number(Checker& c, const Json& in, Json& out, const Path& prefix, const char* key, double fallback,
                  const Range& range) {
  const double v = c.number(in, prefix, key, fallback);
  if (!range.contains(v)) c.fail(field(prefix, key), range.text);
  out[key] = v;
  return v;
}

std::uint64_t put_integer(Checker& c, const Json& in, Json& out, const Path& prefix, const char* key,
                          std::uint64_t fallback, std::uint64_t min) {
  const std::uint64_t v = c.integer(in, prefix, key, fallback);
  if (v < min) c.fail(field(prefix, key), "must be at least " + std::to_string(min));
  out[key] = v;
  return v;
}

// ---- games

const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names{"pd", "stag_hunt", "coordination", "nash_demand", "ultimatum",
                                              "public_goods"};
  return names;
}

std::optional<std::string> canonical_builtin(const std::string& name) {
  if (name == "prisoners_dilemma") return "pd";
  if (name == "ultimatum_minigame") return "ultimatum";
  if (std::find(builtin_names().begin(), builtin_names().end(), name) != builtin_names().end()) return name;
  return std::nullopt;
}

std::string builtin_list() {
  std::string s;
  for (const auto& n : builtin_names()) s += (s.empty() ? "" : ", ") + n;
  return s;
}

std::optional<Json> normalize_builtin(Checker& c, const std::string& name, const Json& in, const Path& path) {
  const auto canon = canonical_builtin(name);
  if (!canon) {
    c.fail(in.contains("builtin") ? field(path, "builtin") : path,
           "unknown game '" + name + "'; built-ins are " + builtin_list());
    return std::nullopt;
  }
  const std::size_t before = c.errors.size();
  Json out{{"builtin", *canon}};
  if (*canon == "nash_demand") {
    c.allow_only(in, path, {"builtin", "resource", "demands"});
    put_number(c, in, out, path, "resource", 10.0, kPositive);
    Json demands = Json::array({3.0, 5.0, 7.0});
    if (in.contains("demands")) {
      demands = in.at("demands");
      if (!demands.is_array() || demands.empty()) {
        c.fail(field(path, "demands"), "must be a non-empty array of numbers");
      } else {
        for (std::size_t i = 0; i < demands.size(); ++i)
          if (!demands[i].is_number()) c.fail(element(field(path, "demands"), i), "must be a number");
      }
    }
    out["demands"] = demands;
  } else if (*canon == "ultimatum") {
    c.allow_only(in, path, {"builtin", "pie", "fair_offer", "low_offer"});
    put_number(c, in, out, path, "pie", 10.0, kPositive);
    put_number(c, in, out, path, "fair_offer", 5.0, kPositive);
    put_number(c, in, out, path, "low_offer", 2.0, kPositive);
  } else if (*canon == "public_goods") {
    c.allow_only(in, path, {"builtin", "n", "endowment", "multiplier", "division"});
    put_integer(c, in, out, path, "n", 4, 2);
    put_number(c, in, out, path, "endowment", 1.0, kPositive);
    put_number(c, in, out, path, "multiplier", 2.0, kPositive);
    const std::string division = c.text(in, path, "division", "all-players");
    if (division != "all-players" && division != "contributors-only")
      c.fail(field(path, "division"), "must be \"all-players\" or \"contributors-only\"");
    out["division"] = division;
  } else {
    c.allow_only(in, path, {"builtin"});
  }
  if (c.errors.size() != before) return std::nullopt;
  try {
    (void)build_game(out);
  } catch (const std::exception& e) {
    c.fail(path, e.what());
    return std::nullopt;
  }
  return out;
}

std::optional<Json> normalize_game(Checker& c, const Json& v, const Path& path) {
  if (v.is_string()) return normalize_builtin(c, v.get<std::string>(), Json::object(), path);
  if (!v.is_object()) {
    c.fail(path, "must be a built-in game name or an object");
    return std::nullopt;
  }
  if (v.contains("builtin")) {
    if (!v.at("builtin").is_string()) {
      c.fail(field(path, "builtin"), "must be a string");
      return std::nullopt;
    }
    return normalize_builtin(c, v.at("builtin").get<std::string>(), v, path);
  }
  Json doc = v;
  if (v.contains("file")) {
    c.allow_only(v, path, {"file"});
    auto loaded = c.load_file(v, path);
    if (!loaded) return std::nullopt;
    doc = std::move(*loaded);
  }
  try {
    return game_to_json(game_from_json(doc));
  } catch (const std::exception& e) {
    c.fail(path, std::string("not a valid game: ") + e.what());
    return std::nullopt;
  }
}

// ---- automata and repeated-game parameters

std::optional<Json> normalize_automaton(Checker& c, const Json& v, const Path& path) {
  if (v.is_string()) {
    const auto& names = preset_names();
    if (std::find(names.begin(), names.end(), v.get<std::string>()) == names.end()) {
      std::string list;
      for (const auto& n : names) list += (list.empty() ? "" : ", ") + n;
      c.fail(path, "unknown preset '" + v.get<std::string>() + "'; presets are " + list);
      return std::nullopt;
    }
    return Json(v);
  }
  if (!v.is_object()) {
    c.fail(path, "must be a preset name or an automaton object");
    return std::nullopt;
  }
  Json doc = v;
  if (v.contains("file")) {
    c.allow_only(v, path, {"file"});
    auto loaded = c.load_file(v, path);
    if (!loaded) return std::nullopt;
    doc = std::move(*loaded);
  }
  try {
    return automaton_to_json(automaton_from_json(doc));
  } catch (const std::exception& e) {
    c.fail(path, std::string("not a valid automaton: ") + e.what());
    return std::nullopt;
  }
}

std::string automaton_name(const Json& normalized) {
  return normalized.is_string() ? normalized.get<std::string>() : normalized.at("name").get<std::string>();
}

Json normalize_roster(Checker& c, const Json* v, const Path& path, const std::vector<std::string>& fallback) {
  Json out = Json::array();
  if (!v) {
    for (const auto& n : fallback) out.push_back(n);
    return out;
  }
  if (!v->is_array() || v->empty()) {
    c.fail(path, "must be a non-empty array of strategies");
    return out;
  }
  std::set<std::string> seen;
  for (std::size_t i = 0; i < v->size(); ++i) {
    auto a = normalize_automaton(c, (*v)[i], element(path, i));
    if (!a) continue;
    if (!seen.insert(automaton_name(*a)).second)
      c.fail(element(path, i), "duplicate strategy name '" + automaton_name(*a) + "'");
    out.push_back(std::move(*a));
  }
  return out;
}

Json normalize_params(Checker& c, const Json* v, const Path& path) {
  static const Json empty = Json::object();
  const Json& in = v ? *v : empty;
  Json out = Json::object();
  if (v && !c.is_object(*v, path)) return out;
  c.allow_only(in, path, {"epsilon", "apology_cost", "reliability", "continuation", "discount", "horizon"});
  put_number(c, in, out, path, "epsilon", 0.05, kUnitHalfOpen);
  put_number(c, in, out, path, "apology_cost", 0.0, kNonNegative);
  put_number(c, in, out, path, "reliability", 0.0, kUnit);
  const std::string cont = c.text(in, path, "continuation", "limit-of-means");
  if (cont != "limit-of-means" && cont != "discounted")
    c.fail(field(path, "continuation"), "must be \"limit-of-means\" or \"discounted\"");
  out["continuation"] = cont;
  put_number(c, in, out, path, "discount", 0.9, kUnitOpen);
  put_integer(c, in, out, path, "horizon", 100000, 1);
  return out;
}

Json normalize_dynamics(Checker& c, const Json* v, const Path& path) {
  static const Json empty = Json::object();
  const Json& in = v ? *v : empty;
  Json out = Json::object();
  if (v && !c.is_object(*v, path)) return out;
  c.allow_only(in, path,
               {"kind", "step_size", "assortment", "mutation", "selection_intensity", "convergence_tol", "max_steps",
                "record_every", "population_size"});
  const std::string kind = c.text(in, path, "kind", "replicator-ode");
  if (!parse_dynamics_kind(kind)) c.fail(field(path, "kind"), "must be replicator-ode, replicator-map or moran");
  out["kind"] = kind;
  put_number(c, in, out, path, "step_size", 0.05, kPositive);
  put_number(c, in, out, path, "assortment", 0.0, kUnit);
  put_number(c, in, out, path, "mutation", 0.0, kUnit);
  put_number(c, in, out, path, "selection_intensity", 1.0, kUnitOpenClosed);
  put_number(c, in, out, path, "convergence_tol", 1e-9, kPositive);
  put_integer(c, in, out, path, "max_steps", 1000000, 1);
  put_integer(c, in, out, path, "record_every", 1, 0);
  put_integer(c, in, out, path, "population_size", 100, 2);
  return out;
}

std::optional<std::vector<double>> number_array(Checker& c, const Json& v, const Path& path) {
  if (!v.is_array() || v.empty()) {
    c.fail(path, "must be a non-empty array of numbers");
    return std::nullopt;
  }
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) {
      c.fail(element(path, i), "must be a number");
      return std::nullopt;
    }
    out.push_back(v[i].get<double>());
  }
  return out;
}

std::optional<PopulationState> population(Checker& c, const Json& v, const Path& path, std::size_t dim) {
  auto xs = number_array(c, v, path);
  if (!xs) return std::nullopt;
  if (xs->size() != dim) {
    c.fail(path, "must have " + std::to_string(dim) + " entries, one per strategy");
    return std::nullopt;
  }
  try {
    return PopulationState(*xs);
  } catch (const std::exception&) {
    c.fail(path, "must be non-negative and sum to 1");
    return std::nullopt;
  }
}

// ---- per-experiment sections

// Fills out["game"] or out["roster"] + out["repeated"]; returns the game when it
// could be built.
std::optional<MatrixGame> game_or_roster(Checker& c, const Json& in, Json& out) {
  const bool has_game = in.contains("game");
  const bool has_roster = in.contains("roster");
  if (has_game && has_roster) {
    c.fail("roster", "give either game or roster, not both");
    return std::nullopt;
  }
  if (!has_game && !has_roster) {
    c.fail("game", "required (or give a roster of repeated-game strategies)");
    return std::nullopt;
  }
  const std::size_t before = c.errors.size();
  if (has_game) {
    if (in.contains("repeated")) c.fail("repeated", "only used together with a roster");
    auto g = normalize_game(c, in.at("game"), "game");
    if (!g) return std::nullopt;
    out["game"] = *g;
  } else {
    out["roster"] = normalize_roster(c, &in.at("roster"), "roster", {});
    out["repeated"] = normalize_params(c, in.contains("repeated") ? &in.at("repeated") : nullptr, "repeated");
  }
  if (c.errors.size() != before) return std::nullopt;
  try {
    MatrixGame game = resolve_game(out);
    if (!game.symmetric()) {
      c.fail("game", "population dynamics need a symmetric game");
      return std::nullopt;
    }
    return game;
  } catch (const std::exception& e) {
    c.fail(has_game ? "game" : "roster", e.what());
    return std::nullopt;
  }
}

void check_samples(Checker& c, const Json& in, Json& out, std::uint64_t fallback) {
  put_integer(c, in, out, "", "samples", fallback, 1);
}

void nash_section(Checker& c, const Json& in, Json& out) {
  c.allow_only(in, "", {"experiment", "seed", "output", "description", "game", "mixed", "max_support"});
  if (!in.contains("game")) {
    c.fail("game", "required");
    return;
  }
  auto g = normalize_game(c, in.at("game"), "game");
  if (!g) return;
  out["game"] = *g;
  const MatrixGame game = build_game(*g);
  const bool mixed = c.boolean(in, "", "mixed", true);
  out["mixed"] = mixed;
  if (!mixed) return;
  if (game.rows() > 4 || game.cols() > 4) {
    c.fail("mixed", "mixed equilibria are only computed for games up to 4x4; set mixed to false");
    return;
  }
  const std::size_t dim = std::min(game.rows(), game.cols());
  const std::uint64_t s = c.integer(in, "", "max_support", dim);
  if (s < 1 || s > dim) c.fail("max_support", "must lie in [1," + std::to_string(dim) + "]");
  out["max_support"] = s;
}

void evolve_section(Checker& c, const Json& in, Json& out) {
  c.allow_only(in, "", {"experiment", "seed", "output", "description", "game", "roster", "repeated", "dynamics",
                        "initial"});
  auto game = game_or_roster(c, in, out);
  out["dynamics"] = normalize_dynamics(c, in.contains("dynamics") ? &in.at("dynamics") : nullptr, "dynamics");
  if (!game) return;
  if (in.contains("initial")) {
    if (auto x = population(c, in.at("initial"), "initial", game->rows())) out["initial"] = x->vector();
  } else {
    out["initial"] = PopulationState::barycenter(game->rows()).vector();
  }
}

void basins_section(Checker& c, const Json& in, Json& out) {
  c.allow_only(in, "", {"experiment", "seed", "output", "description", "game", "roster", "repeated", "dynamics",
                        "samples", "attractors"});
  auto game = game_or_roster(c, in, out);
  out["dynamics"] = normalize_dynamics(c, in.contains("dynamics") ? &in.at("dynamics") : nullptr, "dynamics");
  check_samples(c, in, out, 1000);

  static const Json empty = Json::object();
  const Json& a = in.contains("attractors") ? in.at("attractors") : empty;
  Json lib = Json::object();
  if (!c.is_object(a, "attractors")) return;
  c.allow_only(a, "attractors", {"include_vertices", "radius", "extra"});
  lib["include_vertices"] = c.boolean(a, "attractors", "include_vertices", true);
  put_number(c, a, lib, "attractors", "radius", kDefaultMatchRadius, kPositive);
  Json extra = Json::array();
  if (a.contains("extra")) {
    const Json& list = a.at("extra");
    if (!list.is_array()) {
      c.fail("attractors.extra", "must be an array");
    } else {
      for (std::size_t i = 0; i < list.size(); ++i) {
        const Path p = element("attractors.extra", i);
        const Json& item = list[i];
        if (!c.is_object(item, p)) continue;
        c.allow_only(item, p, {"label", "state", "edge"});
        Json norm = Json::object();
        norm["label"] = c.text(item, p, "label", "");
        if (norm["label"].get<std::string>().empty()) c.fail(field(p, "label"), "required");
        if (item.contains("state") == item.contains("edge")) {
          c.fail(p, "give exactly one of state or edge");
        } else if (item.contains("state")) {
          if (game) {
            if (auto x = population(c, item.at("state"), field(p, "state"), game->rows())) norm["state"] = x->vector();
          }
        } else {
          const Json& e = item.at("edge");
          if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string()) {
            c.fail(field(p, "edge"), "must be a pair of strategy labels");
          } else if (game) {
            auto i0 = game->row_index(e[0].get<std::string>());
            auto i1 = game->row_index(e[1].get<std::string>());
            if (!i0 || !i1 || *i0 == *i1)
              c.fail(field(p, "edge"), "must name two distinct strategies of the game");
            else if (!edge_rest_point(*game, *i0, *i1))
              c.fail(field(p, "edge"), "the game has no rest point strictly inside this edge");
            else
              norm["edge"] = e;
          }
        }
        extra.push_back(std::move(norm));
      }
    }
  }
  lib["extra"] = extra;
  out["attractors"] = lib;
}

void repeated_section(Checker& c, const Json& in, Json& out) {
  c.allow_only(in, "", {"experiment", "seed", "output", "description", "roster", "repeated", "monte_carlo",
                        "deterrence", "trace"});
  out["roster"] = normalize_roster(c, in.contains("roster") ? &in.at("roster") : nullptr, "roster", preset_names());
  out["repeated"] = normalize_params(c, in.contains("repeated") ? &in.at("repeated") : nullptr, "repeated");
  out["monte_carlo"] = c.boolean(in, "", "monte_carlo", true);

  std::set<std::string> names;
  for (const auto& a : out["roster"]) names.insert(automaton_name(a));
  auto strategy = [&](const Json& obj, const Path& p, const char* key) {
    const std::string s = c.text(obj, p, key, "");
    if (!names.count(s)) c.fail(field(p, key), "must name a roster strategy");
    return s;
  };

  if (in.contains("deterrence")) {
    const Json& d = in.at("deterrence");
    if (c.is_object(d, "deterrence")) {
      c.allow_only(d, "deterrence", {"incumbent", "invader", "k_grid"});
      Json nd = Json::object();
      nd["incumbent"] = strategy(d, "deterrence", "incumbent");
      nd["invader"] = strategy(d, "deterrence", "invader");
      if (!d.contains("k_grid")) {
        c.fail("deterrence.k_grid", "required");
      } else if (auto grid = number_array(c, d.at("k_grid"), "deterrence.k_grid")) {
        if (!std::is_sorted(grid->begin(), grid->end())) c.fail("deterrence.k_grid", "must be sorted ascending");
        if (std::any_of(grid->begin(), grid->end(), [](double k) { return k < 0.0; }))
          c.fail("deterrence.k_grid", "costs must be >= 0");
        nd["k_grid"] = *grid;
      }
      out["deterrence"] = nd;
    }
  }
  if (in.contains("trace")) {
    const Json& t = in.at("trace");
    if (c.is_object(t, "trace")) {
      c.allow_only(t, "trace", {"a", "b", "rounds"});
      Json nt = Json::object();
      nt["a"] = strategy(t, "trace", "a");
      nt["b"] = strategy(t, "trace", "b");
      put_integer(c, t, nt, "trace", "rounds", 100, 1);
      out["trace"] = nt;
    }
  }
  if (c.errors.empty()) {
    try {
      (void)build_roster(out["roster"]);
    } catch (const std::exception& e) {
      c.fail("roster", e.what());
    }
  }
}

void sweep_section(Checker& c, const Json& in, Json& out) {
  c.allow_only(in, "", {"experiment", "seed", "output", "description", "roster", "repeated", "dynamics", "samples",
                        "grid", "radius"});
  out["roster"] = normalize_roster(c, in.contains("roster") ? &in.at("roster") : nullptr, "roster",
                                   {"APOLOGIZER", "EXPLOITER", "ALLD"});
  out["repeated"] = normalize_params(c, in.contains("repeated") ? &in.at("repeated") : nullptr, "repeated");
  out["dynamics"] = normalize_dynamics(c, in.contains("dynamics") ? &in.at("dynamics") : nullptr, "dynamics");
  check_samples(c, in, out, 1000);
  put_number(c, in, out, "", "radius", kDefaultMatchRadius, kPositive);
  if (!in.contains("grid")) {
    c.fail("grid", "required");
    return;
  }
  const Json& g = in.at("grid");
  if (!c.is_object(g, "grid")) return;
  c.allow_only(g, "grid", {"apology_cost", "reliability"});
  Json ng = Json::object();
  for (const char* key : {"apology_cost", "reliability"}) {
    const Path p = field("grid", key);
    if (!g.contains(key)) {
      c.fail(p, "required");
      continue;
    }
    if (auto xs = number_array(c, g.at(key), p)) {
      for (std::size_t i = 0; i < xs->size(); ++i) {
        const double v = (*xs)[i];
        if (std::string_view(key) == "apology_cost" ? v < 0.0 : !kUnit.contains(v))
          c.fail(element(p, i), std::string_view(key) == "apology_cost" ? "must be >= 0" : kUnit.text);
      }
      ng[key] = *xs;
    }
  }
  out["grid"] = ng;
}

void spatial_section(Checker& c, const Json& in, Json& out) {
  c.allow_only(in, "", {"experiment", "seed", "output", "description", "fixture", "topology", "game", "initial",
                        "max_generations", "grid_dump"});
  Json src = in;
  Path topo_path = "topology", game_path = "game", init_path = "initial";
  if (in.contains("fixture")) {
    if (in.contains("topology") || in.contains("game") || in.contains("initial")) {
      c.fail("fixture", "give either a fixture or topology/game/initial, not both");
      return;
    }
    const Json& f = in.at("fixture");
    Json doc = f;
    if (f.is_object() && f.contains("file")) {
      auto loaded = c.load_file(f, "fixture");
      if (!loaded) return;
      doc = std::move(*loaded);
    }
    if (!c.is_object(doc, "fixture")) return;
    src = Json::object();
    for (const char* key : {"topology", "game"})
      if (doc.contains(key)) src[key] = doc.at(key);
    if (doc.contains("strategies")) src["initial"] = doc.at("strategies");
    topo_path = "fixture.topology";
    game_path = "fixture.game";
    init_path = "fixture.strategies";
  }
  bool ok = true;
  std::optional<Topology> topology;
  if (!src.contains("topology")) {
    c.fail(topo_path, "required");
    ok = false;
  } else {
    try {
      topology = topology_from_json(src.at("topology"));
      out["topology"] = topology_to_json(*topology);
    } catch (const std::exception& e) {
      c.fail(topo_path, e.what());
      ok = false;
    }
  }
  std::optional<Json> game;
  if (!src.contains("game")) {
    c.fail(game_path, "required");
    ok = false;
  } else if (!(game = normalize_game(c, src.at("game"), game_path))) {
    ok = false;
  } else {
    out["game"] = *game;
  }
  if (!src.contains("initial")) {
    c.fail(init_path, "required");
    ok = false;
  } else if (!src.at("initial").is_array()) {
    c.fail(init_path, "must be an array of strategy indices");
    ok = false;
  } else {
    for (std::size_t i = 0; i < src.at("initial").size(); ++i)
      if (!non_negative_integer(src.at("initial")[i])) {
        c.fail(element(init_path, i), "must be a strategy index");
        ok = false;
        break;
      }
    if (ok) out["initial"] = src.at("initial");
  }
  put_integer(c, in, out, "", "max_generations", 100, 1);
  out["grid_dump"] = c.boolean(in, "", "grid_dump", false);
  if (!ok) return;
  try {
    const SpatialConfig config(*topology, build_game(*game));
    const SpatialState s{out["initial"].get<std::vector<std::size_t>>(), 0};
    (void)spatial_scores(s, config);
  } catch (const std::exception& e) {
    c.fail(init_path, e.what());
  }
}

}  // namespace

SpecError::SpecError(std::vector<ValidationIssue> issues)
    : std::runtime_error(issues_text(issues)), issues_(std::move(issues)) {}

Validated validate(const Json& raw_in, const ValidateOptions& options) {
  Validated result;
  Checker c(options);
  // a manifest can be run again as a spec
  const Json& raw = raw_in.is_object() && raw_in.contains("schema_version") && raw_in.contains("spec")
                        ? raw_in.at("spec")
                        : raw_in;
  if (!raw.is_object()) {
    result.errors.push_back({"", "run spec must be a JSON object"});
    return result;
  }

  Json out = Json::object();
  std::string experiment = c.text(raw, "", "experiment", options.experiment.value_or(""));
  const auto& kinds = experiment_kinds();
  if (experiment.empty()) {
    c.fail("experiment", "required");
  } else if (std::find(kinds.begin(), kinds.end(), experiment) == kinds.end()) {
    c.fail("experiment", "must be one of nash, evolve, basins, repeated, sweep, spatial");
  } else if (options.experiment && *options.experiment != experiment) {
    c.fail("experiment", "spec is for '" + experiment + "' but was run as '" + *options.experiment + "'");
  }
  out["experiment"] = experiment;

  if (raw.contains("seed")) {
    if (!non_negative_integer(raw.at("seed")))
      c.fail("seed", "must be an unsigned 64-bit integer");
    else
      out["seed"] = raw.at("seed").get<std::uint64_t>();
  }
  if (!out.contains("seed")) {
    std::uint64_t seed = 0;
    if (options.fallback_seed) {
      seed = *options.fallback_seed;
    } else {
      std::random_device rd;
      seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    }
    out["seed"] = seed;
    result.seed_generated = true;
  }
  if (raw.contains("description")) {
    if (!raw.at("description").is_string())
      c.fail("description", "must be a string");
    else
      out["description"] = raw.at("description");
  }

  static const Json empty = Json::object();
  const Json& o = raw.contains("output") ? raw.at("output") : empty;
  Json output = Json::object();
  if (c.is_object(o, "output")) {
    c.allow_only(o, "output", {"dir", "formats"});
    output["dir"] = c.text(o, "output", "dir", "egtlab-out");
    Json formats = Json::array({"csv", "json"});
    if (o.contains("formats")) {
      formats = o.at("formats");
      bool good = formats.is_array() && !formats.empty();
      if (good)
        for (const auto& f : formats) good = good && f.is_string() && (f == "csv" || f == "json");
      if (!good) c.fail("output.formats", "must be a non-empty array drawn from \"csv\", \"json\"");
    }
    output["formats"] = formats;
  }

  if (experiment == "nash") nash_section(c, raw, out);
  else if (experiment == "evolve") evolve_section(c, raw, out);
  else if (experiment == "basins") basins_section(c, raw, out);
  else if (experiment == "repeated") repeated_section(c, raw, out);
  else if (experiment == "sweep") sweep_section(c, raw, out);
  else if (experiment == "spatial") spatial_section(c, raw, out);
  out["output"] = output;

  result.spec = std::move(out);
  result.errors = std::move(c.errors);
  return result;
}

Json normalize(const Json& raw, const ValidateOptions& options) {
  Validated v = validate(raw, options);
  if (!v.ok()) throw SpecError(std::move(v.errors));
  return std::move(v.spec);
}

MatrixGame build_game(const Json& g) {
  if (!g.contains("builtin")) return game_from_json(g);
  const std::string name = g.at("builtin").get<std::string>();
  if (name == "pd") return pd();
  if (name == "stag_hunt") return stag_hunt();
  if (name == "coordination") return coordination();
  if (name == "nash_demand")
    return nash_demand(g.at("resource").get<double>(), g.at("demands").get<std::vector<double>>());
  if (name == "ultimatum")
    return ultimatum_minigame(g.at("pie").get<double>(), g.at("fair_offer").get<double>(),
                              g.at("low_offer").get<double>());
  if (name == "public_goods") {
    PublicGoodsGame pg;
    pg.n = static_cast<int>(g.at("n").get<std::uint64_t>());
    pg.endowment = g.at("endowment").get<double>();
    pg.multiplier = g.at("multiplier").get<double>();
    pg.division = g.at("division") == "contributors-only" ? PotDivision::ContributorsOnly : PotDivision::AllPlayers;
    return public_goods_binary(pg).induced_game();
  }
  throw std::invalid_argument("unknown built-in game '" + name + "'");
}

std::vector<StrategyAutomaton> build_roster(const Json& roster) {
  std::vector<StrategyAutomaton> out;
  for (const auto& a : roster) out.push_back(a.is_string() ? preset(a.get<std::string>()) : automaton_from_json(a));
  return out;
}

RepeatedGameParams build_params(const Json& p) {
  RepeatedGameParams params;
  params.epsilon = p.at("epsilon").get<double>();
  params.apology_cost = p.at("apology_cost").get<double>();
  params.reliability = p.at("reliability").get<double>();
  params.continuation = p.at("continuation") == "discounted" ? Continuation::Discounted : Continuation::LimitOfMeans;
  params.discount = p.at("discount").get<double>();
  params.horizon = p.at("horizon").get<std::uint64_t>();
  return params;
}

DynamicsConfig build_dynamics(const Json& d, std::uint64_t seed) {
  DynamicsConfig c;
  c.kind = *parse_dynamics_kind(d.at("kind").get<std::string>());
  c.step_size = d.at("step_size").get<double>();
  c.assortment = d.at("assortment").get<double>();
  c.mutation = d.at("mutation").get<double>();
  c.selection_intensity = d.at("selection_intensity").get<double>();
  c.convergence_tol = d.at("convergence_tol").get<double>();
  c.max_steps = d.at("max_steps").get<std::uint64_t>();
  c.record_every = d.at("record_every").get<std::uint64_t>();
  c.population_size = d.at("population_size").get<std::size_t>();
  c.seed = seed;
  return c;
}

MatrixGame resolve_game(const Json& spec) {
  if (spec.contains("game")) return build_game(spec.at("game"));
  return induced_matrix(build_roster(spec.at("roster")), build_params(spec.at("repeated")));
}

}  // namespace egt::runner
