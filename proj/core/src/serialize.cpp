#include "egtlab/serialize.hpp"
#include "egtlab/format.hpp"

#include <ostream>
#include <sstream>
#include <stdexcept>

namespace egt {

namespace {

template <class T>
T required(const Json& j, const char* key) {
  if (!j.contains(key)) throw std::invalid_argument(std::string("missing field '") + key + "'");
  return j.at(key).get<T>();
}

Action parse_action(const std::string& s) {
  if (s == "C") return Action::Cooperate;
  if (s == "D") return Action::Defect;
  throw std::invalid_argument("unknown action '" + s + "'");
}

ApologyRule parse_apology(const std::string& s) {
  for (ApologyRule r : {ApologyRule::Never, ApologyRule::OnOwnErrorDefection, ApologyRule::Always})
    if (to_string(r) == s) return r;
  throw std::invalid_argument("unknown apology rule '" + s + "'");
}

AcceptanceRule parse_acceptance(const std::string& s) {
  for (AcceptanceRule r : {AcceptanceRule::BelieveUnexposed, AcceptanceRule::IgnoreApologies})
    if (to_string(r) == s) return r;
  throw std::invalid_argument("unknown acceptance rule '" + s + "'");
}

std::string transition_key(Action own, Action partner, ApologyStatus st) {
  return std::string(to_string(own)) + std::string(to_string(partner)) + ":" + std::string(to_string(st));
}

constexpr Action kActions[] = {Action::Cooperate, Action::Defect};
constexpr ApologyStatus kStatuses[] = {ApologyStatus::None, ApologyStatus::Believed, ApologyStatus::Exposed};

Json interval_pair(const Interval& ci) { return Json::array({ci.low, ci.high}); }

}  // namespace

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

Json game_to_json(const MatrixGame& game) {
  Json payoffs = Json::array();
  for (const auto& row : game.table()) {
    Json r = Json::array();
    for (const auto& p : row) r.push_back(Json::array({p.row, p.col}));
    payoffs.push_back(std::move(r));
  }
  return Json{{"name", game.name()},
              {"row_labels", game.row_labels()},
              {"col_labels", game.col_labels()},
              {"payoffs", std::move(payoffs)},
              {"symmetric", game.symmetric()}};
}

MatrixGame game_from_json(const Json& j) {
  std::vector<std::vector<Payoff>> table;
  for (const auto& row : required<Json>(j, "payoffs")) {
    std::vector<Payoff> r;
    for (const auto& cell : row) {
      if (!cell.is_array() || cell.size() != 2) throw std::invalid_argument("payoff cell must be [u_row, u_col]");
      r.push_back({cell[0].get<double>(), cell[1].get<double>()});
    }
    table.push_back(std::move(r));
  }
  return MatrixGame(required<std::string>(j, "name"), required<std::vector<std::string>>(j, "row_labels"),
                    required<std::vector<std::string>>(j, "col_labels"), std::move(table),
                    required<bool>(j, "symmetric"));
}

Json automaton_to_json(const StrategyAutomaton& a) {
  Json states = Json::array();
  for (const auto& s : a.states()) {
    Json transitions = Json::object();
    for (Action own : kActions)
      for (Action partner : kActions)
        for (ApologyStatus st : kStatuses)
          transitions[transition_key(own, partner, st)] =
              a.state(s.next[AutomatonState::transition_index(own, partner, st)]).name;
    states.push_back(Json{{"name", s.name},
                          {"intent", std::string(to_string(s.intent))},
                          {"apology", std::string(to_string(s.apology))},
                          {"acceptance", std::string(to_string(s.acceptance))},
                          {"transitions", std::move(transitions)}});
  }
  return Json{{"name", a.name()}, {"initial", a.state(a.initial()).name}, {"states", std::move(states)}};
}

StrategyAutomaton automaton_from_json(const Json& j) {
  const Json& states_json = required<Json>(j, "states");
  std::vector<std::string> names;
  for (const auto& s : states_json) names.push_back(required<std::string>(s, "name"));
  auto index_of = [&](const std::string& n) {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == n) return i;
    throw std::invalid_argument("automaton refers to unknown state '" + n + "'");
  };

  std::vector<AutomatonState> states;
  for (const auto& s : states_json) {
    AutomatonState st;
    st.name = required<std::string>(s, "name");
    st.intent = parse_action(required<std::string>(s, "intent"));
    st.apology = parse_apology(required<std::string>(s, "apology"));
    st.acceptance = parse_acceptance(required<std::string>(s, "acceptance"));
    const Json& tr = required<Json>(s, "transitions");
    for (Action own : kActions)
      for (Action partner : kActions)
        for (ApologyStatus status : kStatuses) {
          const std::string key = transition_key(own, partner, status);
          if (!tr.contains(key))
            throw std::invalid_argument("state '" + st.name + "' has no transition for " + key);
          st.next[AutomatonState::transition_index(own, partner, status)] = index_of(tr.at(key).get<std::string>());
        }
    states.push_back(std::move(st));
  }
  return StrategyAutomaton(required<std::string>(j, "name"), std::move(states),
                           index_of(required<std::string>(j, "initial")));
}

Json match_outcome_to_json(const MatchOutcome& m) {
  return Json{{"payoff_a", m.payoff_a},
              {"payoff_b", m.payoff_b},
              {"outcome_distribution",
               Json{{"CC", m.outcome_distribution[0]},
                    {"CD", m.outcome_distribution[1]},
                    {"DC", m.outcome_distribution[2]},
                    {"DD", m.outcome_distribution[3]}}}};
}

Json empirical_outcome_to_json(const EmpiricalOutcome& m) {
  Json j = match_outcome_to_json(m);
  j["stderr_a"] = m.stderr_a;
  j["stderr_b"] = m.stderr_b;
  j["rounds"] = m.rounds;
  return j;
}

std::string trace_csv_row(const TraceRow& row) {
  const auto& a = row.result.a;
  const auto& b = row.result.b;
  std::ostringstream s;
  s << row.round << ',' << to_string(a.intent) << ',' << to_string(b.intent) << ',' << to_string(a.executed) << ','
    << to_string(b.executed) << ',' << (a.apologized ? 1 : 0) << ',' << (b.apologized ? 1 : 0) << ','
    << to_string(a.seen) << ',' << to_string(b.seen) << ',' << format_number(a.payoff) << ','
    << format_number(b.payoff);
  return s.str();
}

void write_trajectory_csv(std::ostream& out, const Trajectory& t, const std::vector<std::string>& labels) {
  out << "time";
  for (const auto& l : labels) out << ',' << l;
  out << '\n';
  for (const auto& p : t.points) {
    out << format_number(p.time);
    for (double v : p.state.shares()) out << ',' << format_number(v);
    out << '\n';
  }
  out << "# terminal," << to_string(t.terminal) << '\n';
}

Json trajectory_to_json(const Trajectory& t, const std::vector<std::string>& labels) {
  Json points = Json::array();
  for (const auto& p : t.points) points.push_back(Json{{"time", p.time}, {"shares", p.state.vector()}});
  return Json{{"labels", labels},
              {"terminal", std::string(to_string(t.terminal))},
              {"steps", t.steps},
              {"payoff_shift", t.payoff_shift},
              {"points", std::move(points)}};
}

Json attractor_summary_json(const ConvergenceResult& r, const std::vector<std::string>& labels,
                            const AttractorLibrary* library) {
  Json j{{"labels", labels},
         {"attractor", r.attractor.vector()},
         {"terminal", std::string(to_string(r.trajectory.terminal))},
         {"steps", r.trajectory.steps}};
  if (library) {
    const auto k = library->classify(r.attractor);
    j["classified_as"] = k ? Json(library->attractors()[*k].label) : Json(nullptr);
  }
  return j;
}

Json basin_report_to_json(const BasinReport& r) {
  Json attractors = Json::array();
  for (const auto& b : r.attractors)
    attractors.push_back(
        Json{{"label", b.label}, {"count", b.count}, {"fraction", b.fraction}, {"ci95", interval_pair(b.ci)}});
  return Json{{"attractors", std::move(attractors)},
              {"unclassified", r.unclassified},
              {"total", r.total},
              {"seed", r.seed}};
}

void write_basin_csv(std::ostream& out, const BasinReport& r) {
  out << "attractor_label,count,fraction,ci_lo,ci_hi,samples,seed\n";
  for (const auto& b : r.attractors)
    out << b.label << ',' << b.count << ',' << format_number(b.fraction) << ',' << format_number(b.ci.low) << ','
        << format_number(b.ci.high) << ',' << r.total << ',' << r.seed << '\n';
  const Interval un = wilson_interval(r.unclassified, r.total);
  out << "unclassified," << r.unclassified << ','
      << format_number(static_cast<double>(r.unclassified) / static_cast<double>(r.total)) << ','
      << format_number(un.low) << ',' << format_number(un.high) << ',' << r.total << ',' << r.seed << '\n';
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "k,r,attractor_label,fraction,ci_lo,ci_hi,samples,seed\n";
  for (const auto& row : rows)
    out << format_number(row.apology_cost) << ',' << format_number(row.reliability) << ',' << row.label << ','
        << format_number(row.fraction) << ',' << format_number(row.ci.low) << ',' << format_number(row.ci.high)
        << ',' << row.samples << ',' << row.seed << '\n';
}

Json topology_to_json(const Topology& t) {
  if (const auto* ring = std::get_if<RingTopology>(&t))
    return Json{{"kind", "ring"}, {"nodes", ring->nodes}, {"radius", ring->radius}};
  const auto& g = std::get<GridTopology>(t);
  return Json{{"kind", "grid"},
              {"width", g.width},
              {"height", g.height},
              {"neighborhood", g.neighborhood == Neighborhood::Moore ? "moore" : "von_neumann"},
              {"wrap", g.wrap}};
}

Topology topology_from_json(const Json& j) {
  const auto kind = required<std::string>(j, "kind");
  if (kind == "ring") return RingTopology{required<std::size_t>(j, "nodes"), j.value("radius", std::size_t{1})};
  if (kind == "grid") {
    const auto n = j.value("neighborhood", std::string("moore"));
    if (n != "moore" && n != "von_neumann") throw std::invalid_argument("unknown neighborhood '" + n + "'");
    return GridTopology{required<std::size_t>(j, "width"), required<std::size_t>(j, "height"),
                        n == "moore" ? Neighborhood::Moore : Neighborhood::VonNeumann, j.value("wrap", true)};
  }
  throw std::invalid_argument("unknown topology kind '" + kind + "'");
}

Json spatial_state_to_json(const Topology& t, const std::string& game, const SpatialState& s) {
  return Json{{"topology", topology_to_json(t)},
              {"game", game},
              {"generation", s.generation},
              {"strategies", s.strategies}};
}

SpatialState spatial_state_from_json(const Json& j) {
  return SpatialState{required<std::vector<std::size_t>>(j, "strategies"), j.value("generation", std::uint64_t{0})};
}

void write_frequency_csv(std::ostream& out, const SpatialRun& run, const std::vector<std::string>& labels) {
  out << "generation";
  for (const auto& l : labels) out << ',' << l;
  out << '\n';
  for (std::size_t g = 0; g < run.frequencies.size(); ++g) {
    out << g;
    for (double v : run.frequencies[g]) out << ',' << format_number(v);
    out << '\n';
  }
}

std::string grid_dump(const SpatialState& s, const GridTopology& t) {
  std::string out;
  for (std::size_t y = 0; y < t.height; ++y) {
    for (std::size_t x = 0; x < t.width; ++x) out += static_cast<char>('0' + s.strategies.at(y * t.width + x) % 10);
    out += '\n';
  }
  return out;
}

}  // namespace egt
