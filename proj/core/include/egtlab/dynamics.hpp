#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "egtlab/games.hpp"

namespace egt {

class Rng;

inline constexpr double kSimplexTol = 1e-9;

/// A point on the probability simplex over a strategy roster.
class PopulationState {
 public:
  /// Throws std::invalid_argument unless entries are >= 0 and sum to 1
  /// within `tol`.
  explicit PopulationState(std::vector<double> shares, double tol = kSimplexTol);

  static PopulationState vertex(std::size_t dim, std::size_t index);
  static PopulationState barycenter(std::size_t dim);

  std::size_t size() const { return shares_.size(); }
  double operator[](std::size_t i) const { return shares_[i]; }
  std::span<const double> shares() const { return shares_; }
  const std::vector<double>& vector() const { return shares_; }

  double l1_distance(const PopulationState& other) const;

  bool operator==(const PopulationState&) const = default;

 private:
  std::vector<double> shares_;
};

enum class DynamicsKind { ReplicatorOde, ReplicatorMap, Moran };
std::string_view to_string(DynamicsKind k);
std::optional<DynamicsKind> parse_dynamics_kind(std::string_view s);

struct DynamicsConfig {
  DynamicsKind kind = DynamicsKind::ReplicatorOde;
  double step_size = 0.05;            ///< RK4 step (ODE time units)
  double assortment = 0.0;            ///< e in [0, 1]
  double mutation = 0.0;              ///< Moran: P(offspring is a uniform random type)
  double selection_intensity = 1.0;   ///< Moran: w in (0, 1]
  double convergence_tol = 1e-9;      ///< stop once the flow (or map change) drops below this
  std::uint64_t max_steps = 1'000'000;
  /// Keep every n-th state in the trajectory; 0 keeps only the endpoints.
  std::uint64_t record_every = 1;
  std::size_t population_size = 100;  ///< Moran only
  std::uint64_t seed = 0;             ///< Moran only

  void validate() const;
};

enum class Termination { Converged, MaxSteps, CycleDetected };
std::string_view to_string(Termination t);

struct TrajectoryPoint {
  double time = 0.0;
  PopulationState state;
};

struct Trajectory {
  std::vector<TrajectoryPoint> points;
  Termination terminal = Termination::MaxSteps;
  std::uint64_t steps = 0;
  /// Affine shift added to payoffs by the discrete map (0 for the ODE).
  double payoff_shift = 0.0;

  const PopulationState& final_state() const { return points.back().state; }
};

/// f_i = e u(i,i) + (1 - e) sum_j x_j u(i,j). Requires a symmetric game.
std::vector<double> fitness(const MatrixGame& game, const PopulationState& x, double assortment);

/// dx_i/dt = x_i (f_i - mean f).
std::vector<double> replicator_flow(const MatrixGame& game, std::span<const double> x, double assortment);

/// One classical RK4 step of the replicator ODE, projected back onto the simplex.
PopulationState replicator_ode_step(const MatrixGame& game, const PopulationState& x, const DynamicsConfig& config);
Trajectory integrate_replicator(const MatrixGame& game, const PopulationState& x0, const DynamicsConfig& config);

/// Shift that makes every payoff at least 1: 1 - min u.
double map_payoff_shift(const MatrixGame& game);
/// x_i' = x_i F_i / mean F with F = f + map_payoff_shift(game).
PopulationState replicator_map_step(const MatrixGame& game, const PopulationState& x, const DynamicsConfig& config);
Trajectory iterate_replicator_map(const MatrixGame& game, const PopulationState& x0, const DynamicsConfig& config);

// Finite-population Moran process (birth proportional to 1 - w + w f, death uniform).

/// Payoff of each type against the rest of the population (self excluded),
/// after shifting payoffs to be non-negative.
std::vector<double> moran_fitness(const MatrixGame& game, std::span<const std::size_t> counts, const DynamicsConfig& config);
/// One birth-death event.
std::vector<std::size_t> moran_step(const MatrixGame& game, std::vector<std::size_t> counts,
                                    const DynamicsConfig& config, Rng& rng);

struct MoranResult {
  std::vector<std::size_t> counts;
  std::optional<std::size_t> absorbed;  ///< set once a single type remains (mutation == 0)
  std::uint64_t steps = 0;
};

/// Runs until absorption (mutation == 0) or for config.max_steps events.
MoranResult moran_run(const MatrixGame& game, std::vector<std::size_t> counts, const DynamicsConfig& config,
                      std::uint64_t seed);

/// Integer counts summing to n that approximate x (largest remainder).
std::vector<std::size_t> counts_from_shares(const PopulationState& x, std::size_t n);

struct ConvergenceResult {
  PopulationState attractor;
  Trajectory trajectory;
};

/// Dispatches on config.kind. For Moran the attractor is the absorbed vertex
/// (or the final composition if absorption did not happen).
ConvergenceResult run_to_convergence(const MatrixGame& game, const PopulationState& x0, const DynamicsConfig& config);

}  // namespace egt
