#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "egtlab/games.hpp"

namespace egt {

class Rng;

// Noisy iterated prisoner's dilemma with apologies.
//
// Each round both players read an intended action from their automaton; an
// intended Cooperate is executed as Defect with probability epsilon (errors
// are one-sided). A player who executed Defect may then apologize, paying
// apology_cost. An apology is sincere when the player intended to cooperate;
// sincere apologies are never exposed, insincere ones are exposed with
// probability reliability. Each automaton then moves on (own executed action,
// partner executed action, partner apology status as seen by this player).

enum class Action : std::uint8_t { Cooperate, Defect };
enum class ApologyRule : std::uint8_t { Never, OnOwnErrorDefection, Always };
enum class AcceptanceRule : std::uint8_t { BelieveUnexposed, IgnoreApologies };
enum class ApologyStatus : std::uint8_t { None, Believed, Exposed };

std::string_view to_string(Action a);
std::string_view to_string(ApologyRule r);
std::string_view to_string(AcceptanceRule r);
std::string_view to_string(ApologyStatus s);

struct AutomatonState {
  std::string name;
  Action intent = Action::Cooperate;
  ApologyRule apology = ApologyRule::Never;
  AcceptanceRule acceptance = AcceptanceRule::IgnoreApologies;
  /// Indexed by transition_index(own, partner, status).
  std::array<std::size_t, 12> next{};

  bool operator==(const AutomatonState&) const = default;

  static constexpr std::size_t transition_index(Action own, Action partner, ApologyStatus status) {
    return static_cast<std::size_t>(own) * 6 + static_cast<std::size_t>(partner) * 3 +
           static_cast<std::size_t>(status);
  }
};

/// Deterministic finite-state strategy for the noisy iterated PD.
class StrategyAutomaton {
 public:
  /// Throws std::invalid_argument if the initial state or any transition
  /// target is out of range.
  StrategyAutomaton(std::string name, std::vector<AutomatonState> states, std::size_t initial = 0);

  const std::string& name() const { return name_; }
  std::size_t size() const { return states_.size(); }
  std::size_t initial() const { return initial_; }
  const AutomatonState& state(std::size_t s) const { return states_.at(s); }
  const std::vector<AutomatonState>& states() const { return states_; }

  std::size_t next(std::size_t s, Action own, Action partner, ApologyStatus status) const {
    return states_[s].next[AutomatonState::transition_index(own, partner, status)];
  }

  bool operator==(const StrategyAutomaton&) const = default;

 private:
  std::string name_;
  std::vector<AutomatonState> states_;
  std::size_t initial_ = 0;
};

/// ALLC, ALLD, TFT, GRIM, APOLOGIZER, EXPLOITER, UNFORGIVING.
StrategyAutomaton preset(std::string_view name);
const std::vector<std::string>& preset_names();

enum class Continuation { LimitOfMeans, Discounted };

struct RepeatedGameParams {
  double epsilon = 0.0;       ///< P(intended C executes as D), in [0, 1)
  double apology_cost = 0.0;  ///< k >= 0, paid per apology issued
  double reliability = 0.0;   ///< P(insincere apology exposed), in [0, 1]
  Continuation continuation = Continuation::LimitOfMeans;
  double discount = 0.9;            ///< delta in (0, 1); used when Discounted
  std::uint64_t horizon = 100'000;  ///< rounds played by simulate_match

  void validate() const;
};

/// Realized randomness of one round. Flags that do not apply (an error flag
/// for a player intending D, exposure of a sincere or absent apology) are
/// ignored by play_round.
struct RoundNoise {
  bool error_a = false;
  bool error_b = false;
  bool exposed_a = false;
  bool exposed_b = false;
};

RoundNoise draw_noise(Rng& rng, const RepeatedGameParams& params);

struct PlayerRound {
  Action intent = Action::Cooperate;
  Action executed = Action::Cooperate;
  bool apologized = false;
  bool exposed = false;
  /// Partner's apology as this player registers it.
  ApologyStatus seen = ApologyStatus::None;
  double payoff = 0.0;
  std::size_t next_state = 0;
};

struct RoundResult {
  PlayerRound a;
  PlayerRound b;
};

RoundResult play_round(const StrategyAutomaton& a, std::size_t state_a, const StrategyAutomaton& b,
                       std::size_t state_b, const RepeatedGameParams& params, const RoundNoise& noise);

/// Joint outcome order used by diagnostic distributions.
enum class JointOutcome : std::uint8_t { CC = 0, CD = 1, DC = 2, DD = 3 };
inline std::size_t outcome_index(Action a, Action b) {
  return static_cast<std::size_t>(a) * 2 + static_cast<std::size_t>(b);
}

struct MatchOutcome {
  double payoff_a = 0.0;
  double payoff_b = 0.0;
  /// Long-run (or discounted) frequency of CC, CD, DC, DD.
  std::array<double, 4> outcome_distribution{};
};

struct EmpiricalOutcome : MatchOutcome {
  /// Batch-means standard error of each per-round average.
  double stderr_a = 0.0;
  double stderr_b = 0.0;
  std::uint64_t rounds = 0;
};

/// Joint state spaces above this size raise UnsupportedSizeError.
inline constexpr std::size_t kMaxJointStates = 10'000;

/// Exact long-run payoffs from the joint Markov chain over automaton states.
MatchOutcome long_run_payoff(const StrategyAutomaton& a, const StrategyAutomaton& b,
                             const RepeatedGameParams& params);

struct TraceRow {
  std::uint64_t round = 0;
  RoundResult result;
};
using TraceSink = std::function<void(const TraceRow&)>;

/// Plays params.horizon rounds. Deterministic in (a, b, params, seed).
EmpiricalOutcome simulate_match(const StrategyAutomaton& a, const StrategyAutomaton& b,
                                const RepeatedGameParams& params, std::uint64_t seed,
                                const TraceSink& trace = {});

/// Symmetric game whose (i, j) entry is long_run_payoff(roster[i], roster[j]).
MatrixGame induced_matrix(const std::vector<StrategyAutomaton>& roster, const RepeatedGameParams& params);

struct DeterrenceResult {
  /// Smallest grid cost at which the incumbent earns strictly more against
  /// itself than the invader earns against it; empty if no grid point works.
  std::optional<double> threshold;
  /// (incumbent vs incumbent, invader vs incumbent) per grid point.
  std::vector<std::pair<double, double>> margins;
};

DeterrenceResult deterrence_threshold(const RepeatedGameParams& params, const StrategyAutomaton& incumbent,
                                      const StrategyAutomaton& invader, const std::vector<double>& k_grid);

}  // namespace egt
