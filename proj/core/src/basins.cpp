#include "egtlab/basins.hpp"
#include "egtlab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>
#include <thread>

namespace egt {

void AttractorLibrary::add(std::string label, PopulationState state, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("AttractorLibrary: radius must be positive");
  if (!attractors_.empty() && attractors_.front().state.size() != state.size())
    throw std::invalid_argument("AttractorLibrary: dimension mismatch");
  double max_radius = radius;
  for (const auto& a : attractors_) max_radius = std::max(max_radius, a.radius);
  for (const auto& a : attractors_)
    if (a.state.l1_distance(state) <= 2.0 * max_radius)
      throw std::invalid_argument("AttractorLibrary: '" + label + "' is too close to '" + a.label + "'");
  attractors_.push_back({std::move(label), std::move(state), radius});
}

AttractorLibrary AttractorLibrary::vertices(const MatrixGame& game, double radius) {
  AttractorLibrary lib;
  for (std::size_t i = 0; i < game.rows(); ++i)
    lib.add(game.row_labels()[i], PopulationState::vertex(game.rows(), i), radius);
  return lib;
}

std::optional<std::size_t> AttractorLibrary::find(const std::string& label) const {
  for (std::size_t i = 0; i < attractors_.size(); ++i)
    if (attractors_[i].label == label) return i;
  return std::nullopt;
}

std::optional<std::size_t> AttractorLibrary::classify(const PopulationState& x) const {
  std::optional<std::size_t> best;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < attractors_.size(); ++i) {
    const double d = attractors_[i].state.l1_distance(x);
    if (d <= attractors_[i].radius && d < best_d) {
      best = i;
      best_d = d;
    }
  }
  return best;
}

std::optional<PopulationState> edge_rest_point(const MatrixGame& game, std::size_t i, std::size_t j) {
  if (!game.symmetric() || i >= game.rows() || j >= game.rows() || i == j)
    throw std::invalid_argument("edge_rest_point: need a symmetric game and two distinct strategies");
  // x u_ii + (1-x) u_ij = x u_ji + (1-x) u_jj
  const double denom = game.row_payoff(i, i) - game.row_payoff(i, j) - game.row_payoff(j, i) + game.row_payoff(j, j);
  if (denom == 0.0) return std::nullopt;
  const double x = (game.row_payoff(j, j) - game.row_payoff(i, j)) / denom;
  if (!(x > 0.0 && x < 1.0)) return std::nullopt;
  std::vector<double> s(game.rows(), 0.0);
  s[i] = x;
  s[j] = 1.0 - x;
  return PopulationState(std::move(s));
}

Interval wilson_interval(std::size_t successes, std::size_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / (1.0 + z2 / n);
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

const BasinEstimate* BasinReport::find(const std::string& label) const {
  for (const auto& a : attractors)
    if (a.label == label) return &a;
  return nullptr;
}

PopulationState sample_simplex(std::size_t dim, Rng& rng) {
  if (dim == 0) throw std::invalid_argument("sample_simplex: dim must be at least 1");
  std::vector<double> x(dim);
  double total = 0.0;
  for (double& v : x) {
    v = rng.exponential();
    total += v;
  }
  for (double& v : x) v /= total;
  return PopulationState(std::move(x));
}

BasinReport estimate_basins(const MatrixGame& game, const DynamicsConfig& config, const AttractorLibrary& library,
                            std::size_t samples, std::uint64_t seed, unsigned threads) {
  if (samples == 0) throw std::invalid_argument("estimate_basins: samples must be at least 1");
  config.validate();
  if (library.size() > 0 && library.attractors().front().state.size() != game.rows())
    throw std::invalid_argument("estimate_basins: attractor dimension does not match the game");

  // outcome[i] = attractor index, or library.size() for unclassified
  std::vector<std::size_t> outcome(samples, library.size());
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      Rng rng = Rng::stream(seed, i);
      const PopulationState x0 = sample_simplex(game.rows(), rng);
      DynamicsConfig c = config;
      c.record_every = 0;
      c.seed = rng.next();
      const ConvergenceResult r = run_to_convergence(game, x0, c);
      if (auto k = library.classify(r.attractor)) outcome[i] = *k;
    }
  };

  threads = std::max(1u, threads);
  if (threads == 1) {
    work(0, samples);
  } else {
    const std::size_t chunk = (samples + threads - 1) / threads;
    std::vector<std::exception_ptr> errors(threads);
    {
      std::vector<std::jthread> pool;
      for (std::size_t t = 0, begin = 0; begin < samples; ++t, begin += chunk)
        pool.emplace_back([&, t, begin] {
          try {
            work(begin, std::min(samples, begin + chunk));
          } catch (...) {
            errors[t] = std::current_exception();
          }
        });
    }
    for (const auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  BasinReport report;
  report.total = samples;
  report.seed = seed;
  std::vector<std::size_t> counts(library.size() + 1, 0);
  for (std::size_t k : outcome) ++counts[k];
  for (std::size_t k = 0; k < library.size(); ++k) {
    BasinEstimate b;
    b.label = library.attractors()[k].label;
    b.count = counts[k];
    b.fraction = static_cast<double>(counts[k]) / static_cast<double>(samples);
    b.ci = wilson_interval(counts[k], samples);
    report.attractors.push_back(std::move(b));
  }
  report.unclassified = counts[library.size()];
  return report;
}

std::vector<SweepRow> basin_sweep(const std::vector<SweepPoint>& grid, const RepeatedGameParams& base,
                                  const std::vector<StrategyAutomaton>& roster, const DynamicsConfig& config,
                                  std::size_t samples, std::uint64_t seed, unsigned threads, double radius) {
  if (grid.empty()) throw std::invalid_argument("basin_sweep: grid is empty");
  std::vector<SweepRow> rows;
  for (const SweepPoint& point : grid) {
    RepeatedGameParams params = base;
    params.apology_cost = point.apology_cost;
    params.reliability = point.reliability;
    const MatrixGame game = induced_matrix(roster, params);
    const AttractorLibrary library = AttractorLibrary::vertices(game, radius);
    const BasinReport report = estimate_basins(game, config, library, samples, seed, threads);
    for (const BasinEstimate& b : report.attractors)
      rows.push_back({point.apology_cost, point.reliability, b.label, b.fraction, b.ci, samples, seed});
    const double un = static_cast<double>(report.unclassified) / static_cast<double>(samples);
    rows.push_back({point.apology_cost, point.reliability, "unclassified", un,
                    wilson_interval(report.unclassified, samples), samples, seed});
  }
  return rows;
}

}  // namespace egt
