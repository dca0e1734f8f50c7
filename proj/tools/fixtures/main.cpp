// Writes the canonical game tables and preset automata as JSON fixtures.
// usage: egtlab_fixtures DATA_DIR
#include <filesystem>
#include <fstream>
#include <iostream>

#include "egtlab/serialize.hpp"

namespace fs = std::filesystem;

static void write(const fs::path& path, const egt::Json& j) {
  fs::create_directories(path.parent_path());
  std::ofstream(path, std::ios::binary) << egt::dump_json(j);
  std::cout << path.string() << '\n';
}

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: egtlab_fixtures DATA_DIR\n";
    return 2;
  }
  const fs::path dir = argv[1];
  write(dir / "games/pd.json", egt::game_to_json(egt::pd()));
  write(dir / "games/stag_hunt.json", egt::game_to_json(egt::stag_hunt()));
  write(dir / "games/nash_demand.json", egt::game_to_json(egt::nash_demand(10.0, {3.0, 5.0, 7.0})));
  write(dir / "games/coordination.json", egt::game_to_json(egt::coordination()));
  write(dir / "games/ultimatum_minigame.json", egt::game_to_json(egt::ultimatum_minigame()));
  write(dir / "games/public_goods.json", egt::game_to_json(egt::public_goods_binary({}).induced_game()));
  for (const auto& name : egt::preset_names())
    write(dir / "automata" / (name + ".json"), egt::automaton_to_json(egt::preset(name)));
  return 0;
}
