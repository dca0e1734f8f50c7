#include "egtlab/spatial.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace egt {

namespace {

std::vector<std::vector<std::size_t>> ring_neighbors(const RingTopology& t) {
  if (t.nodes < 3) throw std::invalid_argument("ring topology needs at least 3 nodes");
  if (t.radius < 1 || 2 * t.radius >= t.nodes) throw std::invalid_argument("ring radius must lie in [1, (n-1)/2]");
  std::vector<std::vector<std::size_t>> out(t.nodes);
  for (std::size_t i = 0; i < t.nodes; ++i) {
    std::set<std::size_t> s;
    for (std::size_t d = 1; d <= t.radius; ++d) {
      s.insert((i + d) % t.nodes);
      s.insert((i + t.nodes - d) % t.nodes);
    }
    out[i].assign(s.begin(), s.end());
  }
  return out;
}

std::vector<std::vector<std::size_t>> grid_neighbors(const GridTopology& t) {
  if (t.width < 3 || t.height < 3) throw std::invalid_argument("grid topology needs width and height of at least 3");
  const auto w = static_cast<long>(t.width);
  const auto h = static_cast<long>(t.height);
  std::vector<std::vector<std::size_t>> out(t.width * t.height);
  for (long y = 0; y < h; ++y) {
    for (long x = 0; x < w; ++x) {
      std::set<std::size_t> s;
      for (long dy = -1; dy <= 1; ++dy) {
        for (long dx = -1; dx <= 1; ++dx) {
          if (dx == 0 && dy == 0) continue;
          if (t.neighborhood == Neighborhood::VonNeumann && dx != 0 && dy != 0) continue;
          long nx = x + dx, ny = y + dy;
          if (t.wrap) {
            nx = (nx + w) % w;
            ny = (ny + h) % h;
          } else if (nx < 0 || ny < 0 || nx >= w || ny >= h) {
            continue;
          }
          s.insert(static_cast<std::size_t>(ny * w + nx));
        }
      }
      out[static_cast<std::size_t>(y * w + x)].assign(s.begin(), s.end());
    }
  }
  return out;
}

void check_state(const SpatialState& state, const SpatialConfig& config) {
  if (state.strategies.size() != config.nodes())
    throw std::invalid_argument("spatial state size does not match the topology");
  for (std::size_t s : state.strategies)
    if (s >= config.game().rows()) throw std::invalid_argument("spatial state holds an invalid strategy index");
}

}  // namespace

SpatialConfig::SpatialConfig(Topology topology, MatrixGame game) : topology_(topology), game_(std::move(game)) {
  if (!game_.symmetric()) throw std::invalid_argument("SpatialConfig: game must be symmetric");
  neighbors_ = std::visit(
      [](const auto& t) {
        if constexpr (std::is_same_v<std::decay_t<decltype(t)>, RingTopology>)
          return ring_neighbors(t);
        else
          return grid_neighbors(t);
      },
      topology_);
}

std::string_view to_string(SpatialStop s) {
  switch (s) {
    case SpatialStop::FixedPoint: return "fixed-point";
    case SpatialStop::TwoCycle: return "two-cycle";
    case SpatialStop::MaxGenerations: return "max-generations";
  }
  return "?";
}

std::vector<double> spatial_scores(const SpatialState& state, const SpatialConfig& config) {
  check_state(state, config);
  std::vector<double> score(config.nodes(), 0.0);
  for (std::size_t i = 0; i < config.nodes(); ++i)
    for (std::size_t j : config.neighbors(i))
      score[i] += config.game().row_payoff(state.strategies[i], state.strategies[j]);
  return score;
}

SpatialState spatial_step(const SpatialState& state, const SpatialConfig& config) {
  const std::vector<double> score = spatial_scores(state, config);
  SpatialState next{state.strategies, state.generation + 1};
  for (std::size_t i = 0; i < config.nodes(); ++i) {
    double best = score[i];
    std::size_t source = i;
    for (std::size_t j : config.neighbors(i))
      if (score[j] > best) {
        best = score[j];
        source = j;
      }
    next.strategies[i] = state.strategies[source];
  }
  return next;
}

std::vector<double> strategy_frequencies(const SpatialState& state, std::size_t strategies) {
  std::vector<double> f(strategies, 0.0);
  for (std::size_t s : state.strategies) f.at(s) += 1.0;
  for (double& v : f) v /= static_cast<double>(state.strategies.size());
  return f;
}

SpatialRun spatial_run(const SpatialState& initial, const SpatialConfig& config, std::uint64_t max_generations) {
  if (max_generations < 1) throw std::invalid_argument("spatial_run: max_generations must be at least 1");
  check_state(initial, config);
  const std::size_t k = config.game().rows();
  SpatialRun run;
  run.frequencies.push_back(strategy_frequencies(initial, k));
  SpatialState previous = initial;
  SpatialState current = initial;
  bool have_previous = false;
  for (std::uint64_t g = 0; g < max_generations; ++g) {
    SpatialState next = spatial_step(current, config);
    run.frequencies.push_back(strategy_frequencies(next, k));
    if (next.strategies == current.strategies) {
      run.terminal = std::move(next);
      run.stop = SpatialStop::FixedPoint;
      return run;
    }
    if (have_previous && next.strategies == previous.strategies) {
      run.terminal = std::move(next);
      run.stop = SpatialStop::TwoCycle;
      return run;
    }
    previous = std::move(current);
    current = std::move(next);
    have_previous = true;
  }
  run.terminal = std::move(current);
  run.stop = SpatialStop::MaxGenerations;
  return run;
}

}  // namespace egt
