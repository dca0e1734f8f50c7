#include <gtest/gtest.h>

#include <sstream>

#include "egtlab/format.hpp"
#include "egtlab/serialize.hpp"
#include "support.hpp"

using namespace egt;
using testing_support::data_dir;
using testing_support::read_file;

TEST(Fixtures, ShippedGamesMatchFreshSerialization) {
  const std::vector<std::pair<std::string, MatrixGame>> games{
      {"pd", pd()},
      {"stag_hunt", stag_hunt()},
      {"nash_demand", nash_demand(10, {3, 5, 7})},
      {"coordination", coordination()},
      {"ultimatum_minigame", ultimatum_minigame()},
      {"public_goods", public_goods_binary({}).induced_game()}};
  for (const auto& [file, game] : games) {
    const std::string shipped = read_file(data_dir() / "games" / (file + ".json"));
    EXPECT_EQ(shipped, dump_json(game_to_json(game))) << file;
    EXPECT_EQ(game_from_json(Json::parse(shipped)), game) << file;
  }
}

TEST(Fixtures, ShippedAutomataMatchPresets) {
  for (const auto& name : preset_names()) {
    const std::string shipped = read_file(data_dir() / "automata" / (name + ".json"));
    EXPECT_EQ(shipped, dump_json(automaton_to_json(preset(name)))) << name;
    EXPECT_EQ(automaton_from_json(Json::parse(shipped)), preset(name)) << name;
  }
}

TEST(Games, AsymmetricRoundTrip) {
  const MatrixGame g("asym", {"u", "d"}, {"l", "m", "r"},
                     {{{1, 2}, {0.5, -1}, {3, 3}}, {{0, 0}, {2, 1}, {-0.25, 4}}}, false);
  EXPECT_EQ(game_from_json(game_to_json(g)), g);
}

TEST(Games, MissingFieldIsReported) {
  Json j = game_to_json(pd());
  j.erase("payoffs");
  try {
    game_from_json(j);
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("payoffs"), std::string::npos);
  }
}

TEST(Automata, BadTransitionTargetThrows) {
  Json j = automaton_to_json(preset("TFT"));
  auto& tr = j["states"][0]["transitions"];
  tr[tr.begin().key()] = "nowhere";
  EXPECT_ANY_THROW(automaton_from_json(j));
}

TEST(Format, ShortestRoundTrip) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(0.0), "0");
  EXPECT_EQ(format_number(2.0), "2");
  EXPECT_EQ(format_number(1.0 / 3.0), "0.3333333333333333");
  for (double v : {1e-300, 0.7179, 123456.789, -2.5e-7}) EXPECT_EQ(std::stod(format_number(v)), v);
}

TEST(Csv, BasinReport) {
  BasinReport r;
  r.attractors.push_back({"A", 3, 0.75, wilson_interval(3, 4)});
  r.unclassified = 1;
  r.total = 4;
  r.seed = 9;
  std::ostringstream s;
  write_basin_csv(s, r);
  const std::string out = s.str();
  EXPECT_EQ(out.substr(0, out.find('\n')), "attractor_label,count,fraction,ci_lo,ci_hi,samples,seed");
  EXPECT_NE(out.find("\nA,3,0.75,"), std::string::npos);
  EXPECT_NE(out.find("\nunclassified,1,0.25,"), std::string::npos);
  EXPECT_EQ(out.back(), '\n');
}

TEST(Csv, Sweep) {
  std::ostringstream s;
  write_sweep_csv(s, {{2, 0.5, "APOLOGIZER", 0.5, {0.4, 0.6}, 100, 7}});
  EXPECT_EQ(s.str(), "k,r,attractor_label,fraction,ci_lo,ci_hi,samples,seed\n2,0.5,APOLOGIZER,0.5,0.4,0.6,100,7\n");
}

TEST(Csv, Trajectory) {
  Trajectory t;
  t.points.push_back({0.0, PopulationState({0.5, 0.5})});
  t.points.push_back({0.05, PopulationState({0.25, 0.75})});
  t.terminal = Termination::Converged;
  std::ostringstream s;
  write_trajectory_csv(s, t, {"a", "b"});
  EXPECT_EQ(s.str(), "time,a,b\n0,0.5,0.5\n0.05,0.25,0.75\n# terminal,converged\n");
  const Json j = trajectory_to_json(t, {"a", "b"});
  EXPECT_EQ(j.at("points").size(), 2u);
  EXPECT_EQ(j.at("terminal"), "converged");
}

TEST(Topology, RoundTrip) {
  for (const Topology& t : {Topology{RingTopology{10, 2}}, Topology{GridTopology{5, 4, Neighborhood::Moore, true}},
                            Topology{GridTopology{3, 3, Neighborhood::VonNeumann, false}}})
    EXPECT_EQ(topology_from_json(topology_to_json(t)), t);
  EXPECT_THROW(topology_from_json(Json{{"kind", "torus"}}), std::invalid_argument);
  EXPECT_THROW(topology_from_json(Json{{"kind", "grid"}, {"width", 3}, {"height", 3}, {"neighborhood", "hex"}}),
               std::invalid_argument);
  const Topology defaults = topology_from_json(Json{{"kind", "grid"}, {"width", 4}, {"height", 4}});
  EXPECT_EQ(std::get<GridTopology>(defaults).neighborhood, Neighborhood::Moore);
}

TEST(Spatial, StateRoundTripAndGridDump) {
  const GridTopology g{3, 3, Neighborhood::Moore, true};
  const SpatialState s{{0, 1, 2, 1, 1, 1, 0, 0, 0}, 4};
  const Json j = spatial_state_to_json(g, "nash_demand", s);
  EXPECT_EQ(spatial_state_from_json(j), s);
  EXPECT_EQ(grid_dump(s, g), "012\n111\n000\n");
}

TEST(Json, DumpIsStable) {
  const Json j{{"b", 1}, {"a", Json::array({1.5, "x"})}};
  EXPECT_EQ(dump_json(j), "{\n  \"b\": 1,\n  \"a\": [\n    1.5,\n    \"x\"\n  ]\n}\n");
}
