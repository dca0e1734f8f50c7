#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace egt {

/// Thrown when an input exceeds the sizes an exact solver is built for.
class UnsupportedSizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

struct Payoff {
  double row = 0.0;
  double col = 0.0;
  bool operator==(const Payoff&) const = default;
};

/// Two-player normal-form game: one (row utility, column utility) pair per
/// strategy profile. Immutable once constructed.
class MatrixGame {
 public:
  /// Throws std::invalid_argument if the table shape does not match the
  /// labels, or if `symmetric` is set but u_col(i,j) != u_row(j,i).
  MatrixGame(std::string name, std::vector<std::string> row_labels,
             std::vector<std::string> col_labels, std::vector<std::vector<Payoff>> payoffs,
             bool symmetric);

  /// Symmetric game from the row player's payoff matrix u(i,j).
  static MatrixGame symmetric_from(std::string name, std::vector<std::string> labels,
                                   const std::vector<std::vector<double>>& row_payoffs);

  const std::string& name() const { return name_; }
  const std::vector<std::string>& row_labels() const { return row_labels_; }
  const std::vector<std::string>& col_labels() const { return col_labels_; }
  std::size_t rows() const { return row_labels_.size(); }
  std::size_t cols() const { return col_labels_.size(); }
  bool symmetric() const { return symmetric_; }

  const Payoff& payoff(std::size_t i, std::size_t j) const { return payoffs_.at(i).at(j); }
  double row_payoff(std::size_t i, std::size_t j) const { return payoff(i, j).row; }
  double col_payoff(std::size_t i, std::size_t j) const { return payoff(i, j).col; }
  const std::vector<std::vector<Payoff>>& table() const { return payoffs_; }

  std::optional<std::size_t> row_index(std::string_view label) const;
  std::optional<std::size_t> col_index(std::string_view label) const;

  double min_payoff() const;
  double max_payoff() const;

  bool operator==(const MatrixGame&) const = default;

 private:
  std::string name_;
  std::vector<std::string> row_labels_;
  std::vector<std::string> col_labels_;
  std::vector<std::vector<Payoff>> payoffs_;
  bool symmetric_ = false;
};

// Canonical games. Strategy order is the order of the labels listed.

/// Cooperate, Defect: CC (2,2), CD (0,3), DC (3,0), DD (1,1).
MatrixGame pd();
/// Stag, Hare: SS (3,3), SH (0,2), HS (2,0), HH (2,2).
MatrixGame stag_hunt();
/// Demands d_i: both get their demand when d_i + d_j <= resource, else both get 0.
MatrixGame nash_demand(double resource, const std::vector<double>& demands);
/// A, B: matching pays 1 each, mismatch 0.
MatrixGame coordination();
/// Role-symmetrized ultimatum minigame. Strategies, in order:
/// Fair/AcceptAll, Fair/RejectLow, Low/AcceptAll, Low/RejectLow.
/// Each pairing plays once in each role and the two role payoffs are averaged.
MatrixGame ultimatum_minigame(double pie = 10.0, double fair_offer = 5.0, double low_offer = 2.0);

enum class PotDivision { AllPlayers, ContributorsOnly };

struct PublicGoodsGame {
  int n = 4;
  double endowment = 1.0;
  double multiplier = 2.0;
  PotDivision division = PotDivision::AllPlayers;

  void validate() const;
};

/// Payoffs of the binary (all-or-nothing) public goods game as a function of
/// how many of the n-1 co-players contribute.
class BinaryPublicGoods {
 public:
  explicit BinaryPublicGoods(PublicGoodsGame game);

  const PublicGoodsGame& game() const { return game_; }
  double contributor(int other_contributors) const;
  double shirker(int other_contributors) const;

  /// Symmetric 2x2 game (Contribute, Shirk) whose population fitness equals
  /// the expected group payoff under random group formation. Exact because
  /// both payoff functions are affine in the number of co-contributors.
  MatrixGame induced_game() const;

 private:
  void check_range(int other_contributors) const;
  PublicGoodsGame game_;
};

BinaryPublicGoods public_goods_binary(const PublicGoodsGame& game);

// Equilibria.

struct StrategyProfile {
  std::size_t row = 0;
  std::size_t col = 0;
  auto operator<=>(const StrategyProfile&) const = default;
};

struct MixedProfile {
  std::vector<double> row_mix;
  std::vector<double> col_mix;

  /// Throws std::invalid_argument unless both vectors are probability vectors
  /// (entries >= 0, sum within 1e-9 of 1).
  void validate() const;
};

struct MixedNashResult {
  std::vector<MixedProfile> equilibria;
  /// Set when the game has equilibrium components (continua). Only the
  /// isolated extreme equilibria found are listed; components are not.
  bool degenerate = false;
};

/// Pure profiles where each strategy is a (weak) best response to the other,
/// in row-major order.
std::vector<StrategyProfile> pure_nash(const MatrixGame& game);

/// Support enumeration over supports of size at most `max_support`.
/// Games larger than 4x4 raise UnsupportedSizeError.
MixedNashResult mixed_nash(const MatrixGame& game, std::size_t max_support);

/// Largest gain any pure deviation achieves against a mixed profile.
double max_deviation_gain(const MatrixGame& game, const MixedProfile& profile);

}  // namespace egt
