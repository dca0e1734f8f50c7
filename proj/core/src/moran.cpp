#include "egtlab/dynamics.hpp"
#include "egtlab/rng.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace egt {

namespace {

std::size_t total(std::span<const std::size_t> counts) {
  return std::accumulate(counts.begin(), counts.end(), std::size_t{0});
}

std::size_t pick_weighted(std::span<const double> weights, double u) {
  const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  double target = u * sum;
  std::size_t last = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    last = i;
    if (target < weights[i]) return i;
    target -= weights[i];
  }
  return last;
}

}  // namespace

std::vector<double> moran_fitness(const MatrixGame& game, std::span<const std::size_t> counts,
                                  const DynamicsConfig& config) {
  if (!game.symmetric() || game.rows() != counts.size())
    throw std::invalid_argument("moran: counts must match a symmetric game");
  const std::size_t n = total(counts);
  if (n < 2) throw std::invalid_argument("moran: population must have at least 2 individuals");
  const double shift = std::max(0.0, -game.min_payoff());
  const double e = config.assortment;
  const double w = config.selection_intensity;
  std::vector<double> phi(counts.size(), 0.0);
  for (std::size_t i = 0; i < counts.size(); ++i) {
    double others = 0.0;
    for (std::size_t j = 0; j < counts.size(); ++j) {
      const double partners = static_cast<double>(counts[j]) - (i == j ? 1.0 : 0.0);
      others += std::max(0.0, partners) * (game.row_payoff(i, j) + shift);
    }
    const double f = e * (game.row_payoff(i, i) + shift) + (1.0 - e) * others / static_cast<double>(n - 1);
    phi[i] = 1.0 - w + w * f;
  }
  return phi;
}

std::vector<std::size_t> moran_step(const MatrixGame& game, std::vector<std::size_t> counts,
                                    const DynamicsConfig& config, Rng& rng) {
  const std::vector<double> phi = moran_fitness(game, counts, config);
  std::vector<double> birth(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) birth[i] = static_cast<double>(counts[i]) * phi[i];
  if (std::accumulate(birth.begin(), birth.end(), 0.0) <= 0.0)
    for (std::size_t i = 0; i < counts.size(); ++i) birth[i] = static_cast<double>(counts[i]);

  std::size_t parent = pick_weighted(birth, rng.uniform());

  std::uint64_t victim = rng.below(total(counts));
  std::size_t dead = 0;
  while (victim >= counts[dead]) victim -= counts[dead++];

  if (config.mutation > 0.0 && rng.uniform() < config.mutation) parent = rng.below(counts.size());

  --counts[dead];
  ++counts[parent];
  return counts;
}

MoranResult moran_run(const MatrixGame& game, std::vector<std::size_t> counts, const DynamicsConfig& config,
                      std::uint64_t seed) {
  config.validate();
  const std::size_t n = total(counts);
  if (n == 0) throw std::invalid_argument("moran_run: population is empty");
  if (n < 2) throw std::invalid_argument("moran_run: population must have at least 2 individuals");

  auto monomorphic = [&]() -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < counts.size(); ++i)
      if (counts[i] == n) return i;
    return std::nullopt;
  };

  Rng rng(seed);
  MoranResult r;
  const bool absorbing = config.mutation == 0.0;
  if (absorbing) r.absorbed = monomorphic();
  while (!r.absorbed && r.steps < config.max_steps) {
    counts = moran_step(game, std::move(counts), config, rng);
    ++r.steps;
    if (absorbing) r.absorbed = monomorphic();
  }
  r.counts = std::move(counts);
  return r;
}

}  // namespace egt
