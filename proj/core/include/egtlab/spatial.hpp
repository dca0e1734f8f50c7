#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <variant>
#include <vector>

#include "egtlab/games.hpp"

namespace egt {

enum class Neighborhood { Moore, VonNeumann };

/// n nodes on a cycle, each linked to `radius` nodes on either side.
struct RingTopology {
  std::size_t nodes = 0;
  std::size_t radius = 1;
  bool operator==(const RingTopology&) const = default;
};

/// width x height lattice; node index = y * width + x.
struct GridTopology {
  std::size_t width = 0;
  std::size_t height = 0;
  Neighborhood neighborhood = Neighborhood::Moore;
  bool wrap = true;
  bool operator==(const GridTopology&) const = default;
};

using Topology = std::variant<RingTopology, GridTopology>;

/// Local-interaction setting: topology plus the symmetric stage game.
/// Update rule is synchronous imitate-the-best-neighbour.
class SpatialConfig {
 public:
  SpatialConfig(Topology topology, MatrixGame game);

  const Topology& topology() const { return topology_; }
  const MatrixGame& game() const { return game_; }
  std::size_t nodes() const { return neighbors_.size(); }
  /// Neighbours of `node`, ascending, self excluded.
  const std::vector<std::size_t>& neighbors(std::size_t node) const { return neighbors_.at(node); }

 private:
  Topology topology_;
  MatrixGame game_;
  std::vector<std::vector<std::size_t>> neighbors_;
};

struct SpatialState {
  std::vector<std::size_t> strategies;
  std::uint64_t generation = 0;
  bool operator==(const SpatialState&) const = default;
};

/// Each node plays every neighbour once and sums its payoffs; then all nodes
/// simultaneously copy the highest scorer among themselves and their
/// neighbours. Ties keep the node's own strategy, otherwise the lowest-index
/// tied neighbour wins.
SpatialState spatial_step(const SpatialState& state, const SpatialConfig& config);

/// Per-node total payoff in the current generation.
std::vector<double> spatial_scores(const SpatialState& state, const SpatialConfig& config);

enum class SpatialStop { FixedPoint, TwoCycle, MaxGenerations };
std::string_view to_string(SpatialStop s);

struct SpatialRun {
  /// Strategy frequencies for generation 0, 1, ..., terminal.
  std::vector<std::vector<double>> frequencies;
  SpatialState terminal;
  SpatialStop stop = SpatialStop::MaxGenerations;
};

std::vector<double> strategy_frequencies(const SpatialState& state, std::size_t strategies);

/// Iterates spatial_step until a fixed point, a period-2 cycle, or
/// max_generations steps.
SpatialRun spatial_run(const SpatialState& initial, const SpatialConfig& config, std::uint64_t max_generations);

}  // namespace egt
