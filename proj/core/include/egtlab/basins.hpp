#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "egtlab/dynamics.hpp"
#include "egtlab/repeated.hpp"

namespace egt {

class Rng;

inline constexpr double kDefaultMatchRadius = 1e-3;

struct Attractor {
  std::string label;
  PopulationState state;
  double radius = kDefaultMatchRadius;  ///< L1 match radius
};

/// Known attractors of a dynamic, used to classify terminal states.
class AttractorLibrary {
 public:
  AttractorLibrary() = default;

  /// Throws std::invalid_argument on a non-positive radius, a dimension
  /// mismatch, or when two attractors are closer than twice the largest radius.
  void add(std::string label, PopulationState state, double radius = kDefaultMatchRadius);

  /// One attractor per simplex vertex, labelled by the game's strategies.
  static AttractorLibrary vertices(const MatrixGame& game, double radius = kDefaultMatchRadius);

  const std::vector<Attractor>& attractors() const { return attractors_; }
  std::size_t size() const { return attractors_.size(); }
  std::optional<std::size_t> find(const std::string& label) const;

  /// Nearest attractor within its radius, if any.
  std::optional<std::size_t> classify(const PopulationState& x) const;

 private:
  std::vector<Attractor> attractors_;
};

/// Rest point on the edge between strategies i and j of a symmetric game,
/// where both earn the same payoff; empty if none lies strictly inside.
std::optional<PopulationState> edge_rest_point(const MatrixGame& game, std::size_t i, std::size_t j);

struct Interval {
  double low = 0.0;
  double high = 0.0;
};

/// Wilson score interval for a binomial proportion (z = 1.96 by default).
Interval wilson_interval(std::size_t successes, std::size_t trials, double z = 1.959963984540054);

struct BasinEstimate {
  std::string label;
  std::size_t count = 0;
  double fraction = 0.0;
  Interval ci;
};

struct BasinReport {
  std::vector<BasinEstimate> attractors;
  std::size_t unclassified = 0;
  std::size_t total = 0;
  std::uint64_t seed = 0;

  const BasinEstimate* find(const std::string& label) const;
};

/// Flat Dirichlet sample: normalized independent unit exponentials.
PopulationState sample_simplex(std::size_t dim, Rng& rng);

/// Runs the dynamic from `samples` uniform initial states and tallies where
/// each ends. Sample i draws from Rng::stream(seed, i), so the report does
/// not depend on `threads`.
BasinReport estimate_basins(const MatrixGame& game, const DynamicsConfig& config, const AttractorLibrary& library,
                            std::size_t samples, std::uint64_t seed, unsigned threads = 1);

struct SweepPoint {
  double apology_cost = 0.0;
  double reliability = 0.0;
};

struct SweepRow {
  double apology_cost = 0.0;
  double reliability = 0.0;
  std::string label;  ///< attractor label or "unclassified"
  double fraction = 0.0;
  Interval ci;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

/// For each grid point, builds the induced game over `roster` and estimates
/// basins of the vertex attractors. Every grid point reuses `seed`, so all
/// points see the same initial conditions.
std::vector<SweepRow> basin_sweep(const std::vector<SweepPoint>& grid, const RepeatedGameParams& base,
                                  const std::vector<StrategyAutomaton>& roster, const DynamicsConfig& config,
                                  std::size_t samples, std::uint64_t seed, unsigned threads = 1,
                                  double radius = kDefaultMatchRadius);

}  // namespace egt
