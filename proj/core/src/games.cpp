#include "egtlab/games.hpp"
#include "egtlab/format.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <utility>

namespace egt {

std::string format_number(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) throw std::runtime_error("format_number: conversion failed");
  return std::string(buf, end);
}

MatrixGame::MatrixGame(std::string name, std::vector<std::string> row_labels,
                       std::vector<std::string> col_labels,
                       std::vector<std::vector<Payoff>> payoffs, bool symmetric)
    : name_(std::move(name)),
      row_labels_(std::move(row_labels)),
      col_labels_(std::move(col_labels)),
      payoffs_(std::move(payoffs)),
      symmetric_(symmetric) {
  if (row_labels_.empty() || col_labels_.empty())
    throw std::invalid_argument("MatrixGame: each player needs at least one strategy");
  if (payoffs_.size() != row_labels_.size())
    throw std::invalid_argument("MatrixGame: payoff rows do not match row labels");
  for (const auto& row : payoffs_)
    if (row.size() != col_labels_.size())
      throw std::invalid_argument("MatrixGame: payoff columns do not match column labels");
  if (symmetric_) {
    if (rows() != cols()) throw std::invalid_argument("MatrixGame: symmetric game must be square");
    for (std::size_t i = 0; i < rows(); ++i)
      for (std::size_t j = 0; j < cols(); ++j)
        if (payoffs_[i][j].col != payoffs_[j][i].row)
          throw std::invalid_argument("MatrixGame: symmetric flag set but u_col(i,j) != u_row(j,i)");
  }
}

MatrixGame MatrixGame::symmetric_from(std::string name, std::vector<std::string> labels,
                                      const std::vector<std::vector<double>>& row_payoffs) {
  const std::size_t n = labels.size();
  if (row_payoffs.size() != n) throw std::invalid_argument("symmetric_from: shape mismatch");
  std::vector<std::vector<Payoff>> table(n, std::vector<Payoff>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (row_payoffs[i].size() != n) throw std::invalid_argument("symmetric_from: shape mismatch");
    for (std::size_t j = 0; j < n; ++j) table[i][j] = {row_payoffs[i][j], row_payoffs[j][i]};
  }
  auto cols = labels;
  return MatrixGame(std::move(name), std::move(labels), std::move(cols), std::move(table), true);
}

std::optional<std::size_t> MatrixGame::row_index(std::string_view label) const {
  auto it = std::find(row_labels_.begin(), row_labels_.end(), label);
  if (it == row_labels_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - row_labels_.begin());
}

std::optional<std::size_t> MatrixGame::col_index(std::string_view label) const {
  auto it = std::find(col_labels_.begin(), col_labels_.end(), label);
  if (it == col_labels_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - col_labels_.begin());
}

double MatrixGame::min_payoff() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& row : payoffs_)
    for (const auto& p : row) m = std::min({m, p.row, p.col});
  return m;
}

double MatrixGame::max_payoff() const {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& row : payoffs_)
    for (const auto& p : row) m = std::max({m, p.row, p.col});
  return m;
}

MatrixGame pd() {
  return MatrixGame::symmetric_from("prisoners_dilemma", {"Cooperate", "Defect"},
                                    {{2.0, 0.0}, {3.0, 1.0}});
}

MatrixGame stag_hunt() {
  return MatrixGame::symmetric_from("stag_hunt", {"Stag", "Hare"}, {{3.0, 0.0}, {2.0, 2.0}});
}

MatrixGame nash_demand(double resource, const std::vector<double>& demands) {
  if (demands.empty()) throw std::invalid_argument("nash_demand: demand list is empty");
  if (!(resource > 0.0)) throw std::invalid_argument("nash_demand: resource must be positive");
  std::vector<std::string> labels;
  for (double d : demands) {
    if (!(d > 0.0 && d < resource))
      throw std::invalid_argument("nash_demand: each demand must lie in (0, resource)");
    labels.push_back(format_number(d));
  }
  const std::size_t n = demands.size();
  std::vector<std::vector<double>> u(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      u[i][j] = demands[i] + demands[j] <= resource ? demands[i] : 0.0;
  return MatrixGame::symmetric_from("nash_demand", std::move(labels), u);
}

MatrixGame coordination() {
  return MatrixGame::symmetric_from("coordination", {"A", "B"}, {{1.0, 0.0}, {0.0, 1.0}});
}

MatrixGame ultimatum_minigame(double pie, double fair_offer, double low_offer) {
  if (!(low_offer > 0.0 && low_offer < fair_offer && fair_offer < pie))
    throw std::invalid_argument("ultimatum_minigame: require 0 < low_offer < fair_offer < pie");

  struct Kind {
    double offer;
    bool rejects_low;
  };
  const std::vector<Kind> kinds = {
      {fair_offer, false}, {fair_offer, true}, {low_offer, false}, {low_offer, true}};
  // proposer payoff when `p` proposes to `r`; responder gets the offer
  auto propose = [&](const Kind& p, const Kind& r) -> Payoff {
    const bool rejected = r.rejects_low && p.offer < fair_offer;
    if (rejected) return {0.0, 0.0};
    return {pie - p.offer, p.offer};
  };
  std::vector<std::vector<double>> u(4, std::vector<double>(4));
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      const Payoff as_proposer = propose(kinds[i], kinds[j]);
      const Payoff as_responder = propose(kinds[j], kinds[i]);
      u[i][j] = 0.5 * (as_proposer.row + as_responder.col);
    }
  return MatrixGame::symmetric_from(
      "ultimatum_minigame", {"Fair/AcceptAll", "Fair/RejectLow", "Low/AcceptAll", "Low/RejectLow"}, u);
}

void PublicGoodsGame::validate() const {
  if (n < 2) throw std::invalid_argument("PublicGoodsGame: n must be at least 2");
  if (!(endowment > 0.0)) throw std::invalid_argument("PublicGoodsGame: endowment must be positive");
  if (!(multiplier > 0.0)) throw std::invalid_argument("PublicGoodsGame: multiplier must be positive");
}

BinaryPublicGoods::BinaryPublicGoods(PublicGoodsGame game) : game_(game) { game_.validate(); }

void BinaryPublicGoods::check_range(int other_contributors) const {
  if (other_contributors < 0 || other_contributors > game_.n - 1)
    throw std::invalid_argument("public goods: co-contributor count outside [0, n-1]");
}

double BinaryPublicGoods::contributor(int j) const {
  check_range(j);
  const double pot = game_.endowment * game_.multiplier * (j + 1);
  if (game_.division == PotDivision::ContributorsOnly) return pot / (j + 1);
  return pot / game_.n;
}

double BinaryPublicGoods::shirker(int j) const {
  check_range(j);
  if (game_.division == PotDivision::ContributorsOnly) return game_.endowment;
  return game_.endowment * game_.multiplier * j / game_.n + game_.endowment;
}

MatrixGame BinaryPublicGoods::induced_game() const {
  const int all_others = game_.n - 1;
  return MatrixGame::symmetric_from(
      "public_goods", {"Contribute", "Shirk"},
      {{contributor(all_others), contributor(0)}, {shirker(all_others), shirker(0)}});
}

BinaryPublicGoods public_goods_binary(const PublicGoodsGame& game) { return BinaryPublicGoods(game); }

}  // namespace egt
