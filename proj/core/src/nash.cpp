#include "egtlab/games.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace egt {

namespace {

constexpr double kTieTol = 1e-12;
constexpr double kBestResponseTol = 1e-9;
constexpr std::size_t kMaxSupportEnumDim = 4;

bool row_is_best_response(const MatrixGame& g, std::size_t i, std::size_t j) {
  for (std::size_t k = 0; k < g.rows(); ++k)
    if (g.row_payoff(k, j) > g.row_payoff(i, j) + kTieTol) return false;
  return true;
}

bool col_is_best_response(const MatrixGame& g, std::size_t i, std::size_t j) {
  for (std::size_t l = 0; l < g.cols(); ++l)
    if (g.col_payoff(i, l) > g.col_payoff(i, j) + kTieTol) return false;
  return true;
}

std::vector<std::vector<std::size_t>> subsets_of_size(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<bool> mask(n, false);
  std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(k), true);
  do {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < n; ++i)
      if (mask[i]) s.push_back(i);
    out.push_back(std::move(s));
  } while (std::prev_permutation(mask.begin(), mask.end()));
  return out;
}

// Solves for the opponent mix on `support_other` that makes every strategy in
// `support_own` indifferent. `payoff(own, other)` is the own player's utility.
struct Indifference {
  enum class Kind { Unique, Continuum, None } kind = Kind::None;
  std::vector<double> mix;  // over support_other
  double value = 0.0;
};

template <class PayoffFn>
Indifference solve_indifference(const std::vector<std::size_t>& support_own,
                                const std::vector<std::size_t>& support_other, PayoffFn payoff) {
  const auto m = static_cast<Eigen::Index>(support_own.size());
  const auto s = static_cast<Eigen::Index>(support_other.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m + 1, s + 1);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(m + 1);
  for (Eigen::Index r = 0; r < m; ++r) {
    for (Eigen::Index c = 0; c < s; ++c)
      a(r, c) = payoff(support_own[static_cast<std::size_t>(r)], support_other[static_cast<std::size_t>(c)]);
    a(r, s) = -1.0;
  }
  for (Eigen::Index c = 0; c < s; ++c) a(m, c) = 1.0;
  b(m) = 1.0;

  Indifference out;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  lu.setThreshold(1e-12);
  Eigen::VectorXd sol;
  if (m == s && lu.isInvertible()) {
    sol = lu.solve(b);
    out.kind = Indifference::Kind::Unique;
  } else {
    sol = a.completeOrthogonalDecomposition().solve(b);
    if ((a * sol - b).norm() > 1e-9) return out;
    out.kind = lu.rank() < s + 1 ? Indifference::Kind::Continuum : Indifference::Kind::Unique;
  }
  out.mix.assign(sol.data(), sol.data() + s);
  out.value = sol(s);
  return out;
}

std::vector<double> expand(const std::vector<double>& mix, const std::vector<std::size_t>& support,
                           std::size_t n) {
  std::vector<double> full(n, 0.0);
  for (std::size_t k = 0; k < support.size(); ++k) full[support[k]] = std::max(0.0, mix[k]);
  const double total = std::accumulate(full.begin(), full.end(), 0.0);
  for (double& v : full) v /= total;
  return full;
}

std::vector<double> row_values(const MatrixGame& g, const std::vector<double>& col_mix) {
  std::vector<double> v(g.rows(), 0.0);
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j) v[i] += g.row_payoff(i, j) * col_mix[j];
  return v;
}

std::vector<double> col_values(const MatrixGame& g, const std::vector<double>& row_mix) {
  std::vector<double> v(g.cols(), 0.0);
  for (std::size_t j = 0; j < g.cols(); ++j)
    for (std::size_t i = 0; i < g.rows(); ++i) v[j] += g.col_payoff(i, j) * row_mix[i];
  return v;
}

bool same_profile(const MixedProfile& a, const MixedProfile& b) {
  for (std::size_t i = 0; i < a.row_mix.size(); ++i)
    if (std::abs(a.row_mix[i] - b.row_mix[i]) > 1e-9) return false;
  for (std::size_t j = 0; j < a.col_mix.size(); ++j)
    if (std::abs(a.col_mix[j] - b.col_mix[j]) > 1e-9) return false;
  return true;
}

}  // namespace

void MixedProfile::validate() const {
  for (const auto* v : {&row_mix, &col_mix}) {
    if (v->empty()) throw std::invalid_argument("MixedProfile: empty mix");
    double total = 0.0;
    for (double p : *v) {
      if (!(p >= 0.0)) throw std::invalid_argument("MixedProfile: negative probability");
      total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("MixedProfile: mix does not sum to 1");
  }
}

std::vector<StrategyProfile> pure_nash(const MatrixGame& game) {
  std::vector<StrategyProfile> out;
  for (std::size_t i = 0; i < game.rows(); ++i)
    for (std::size_t j = 0; j < game.cols(); ++j)
      if (row_is_best_response(game, i, j) && col_is_best_response(game, i, j)) out.push_back({i, j});
  return out;
}

double max_deviation_gain(const MatrixGame& game, const MixedProfile& profile) {
  const auto rv = row_values(game, profile.col_mix);
  const auto cv = col_values(game, profile.row_mix);
  const double row_eq = std::inner_product(rv.begin(), rv.end(), profile.row_mix.begin(), 0.0);
  const double col_eq = std::inner_product(cv.begin(), cv.end(), profile.col_mix.begin(), 0.0);
  double gain = 0.0;
  for (double v : rv) gain = std::max(gain, v - row_eq);
  for (double v : cv) gain = std::max(gain, v - col_eq);
  return gain;
}

MixedNashResult mixed_nash(const MatrixGame& game, std::size_t max_support) {
  if (game.rows() > kMaxSupportEnumDim || game.cols() > kMaxSupportEnumDim)
    throw UnsupportedSizeError("mixed_nash: support enumeration is limited to 4x4 games");
  if (max_support == 0 || max_support > std::min(game.rows(), game.cols()))
    throw std::invalid_argument("mixed_nash: max_support must lie in [1, min(rows, cols)]");

  MixedNashResult result;
  auto row_u = [&](std::size_t i, std::size_t j) { return game.row_payoff(i, j); };
  auto col_u = [&](std::size_t j, std::size_t i) { return game.col_payoff(i, j); };

  for (std::size_t size = 1; size <= max_support; ++size) {
    const auto row_supports = subsets_of_size(game.rows(), size);
    const auto col_supports = subsets_of_size(game.cols(), size);
    for (const auto& rs : row_supports) {
      for (const auto& cs : col_supports) {
        // column mix equalizes the row player's support, and vice versa
        const Indifference y = solve_indifference(rs, cs, row_u);
        const Indifference x = solve_indifference(cs, rs, col_u);
        if (y.kind == Indifference::Kind::None || x.kind == Indifference::Kind::None) continue;
        const bool nonneg = std::all_of(y.mix.begin(), y.mix.end(), [](double p) { return p >= -1e-12; }) &&
                            std::all_of(x.mix.begin(), x.mix.end(), [](double p) { return p >= -1e-12; });
        if (!nonneg) continue;

        MixedProfile profile{expand(x.mix, rs, game.rows()), expand(y.mix, cs, game.cols())};
        if (max_deviation_gain(game, profile) > kBestResponseTol) continue;

        if (y.kind == Indifference::Kind::Continuum || x.kind == Indifference::Kind::Continuum) {
          result.degenerate = true;
          continue;
        }
        // more pure best responses than support size marks a degenerate game
        const auto rv = row_values(game, profile.col_mix);
        const auto cv = col_values(game, profile.row_mix);
        const double rmax = *std::max_element(rv.begin(), rv.end());
        const double cmax = *std::max_element(cv.begin(), cv.end());
        const auto row_br = std::count_if(rv.begin(), rv.end(), [&](double v) { return v >= rmax - kBestResponseTol; });
        const auto col_br = std::count_if(cv.begin(), cv.end(), [&](double v) { return v >= cmax - kBestResponseTol; });
        if (static_cast<std::size_t>(row_br) > size || static_cast<std::size_t>(col_br) > size)
          result.degenerate = true;

        const bool seen = std::any_of(result.equilibria.begin(), result.equilibria.end(),
                                      [&](const MixedProfile& p) { return same_profile(p, profile); });
        if (!seen) result.equilibria.push_back(std::move(profile));
      }
    }
  }
  return result;
}

}  // namespace egt
