#include "egtlab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace egt {

PopulationState::PopulationState(std::vector<double> shares, double tol) : shares_(std::move(shares)) {
  if (shares_.empty()) throw std::invalid_argument("PopulationState: empty share vector");
  double total = 0.0;
  for (double s : shares_) {
    if (!(s >= 0.0)) throw std::invalid_argument("PopulationState: shares must be non-negative");
    total += s;
  }
  if (std::abs(total - 1.0) > tol) throw std::invalid_argument("PopulationState: shares must sum to 1");
}

PopulationState PopulationState::vertex(std::size_t dim, std::size_t index) {
  if (index >= dim) throw std::invalid_argument("PopulationState::vertex: index out of range");
  std::vector<double> v(dim, 0.0);
  v[index] = 1.0;
  return PopulationState(std::move(v));
}

PopulationState PopulationState::barycenter(std::size_t dim) {
  return PopulationState(std::vector<double>(dim, 1.0 / static_cast<double>(dim)));
}

double PopulationState::l1_distance(const PopulationState& other) const {
  if (other.size() != size()) throw std::invalid_argument("l1_distance: dimension mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < size(); ++i) d += std::abs(shares_[i] - other.shares_[i]);
  return d;
}

std::string_view to_string(DynamicsKind k) {
  switch (k) {
    case DynamicsKind::ReplicatorOde: return "replicator-ode";
    case DynamicsKind::ReplicatorMap: return "replicator-map";
    case DynamicsKind::Moran: return "moran";
  }
  return "?";
}

std::optional<DynamicsKind> parse_dynamics_kind(std::string_view s) {
  if (s == "replicator-ode") return DynamicsKind::ReplicatorOde;
  if (s == "replicator-map") return DynamicsKind::ReplicatorMap;
  if (s == "moran") return DynamicsKind::Moran;
  return std::nullopt;
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::Converged: return "converged";
    case Termination::MaxSteps: return "max-steps";
    case Termination::CycleDetected: return "cycle-detected";
  }
  return "?";
}

void DynamicsConfig::validate() const {
  if (!(step_size > 0.0)) throw std::invalid_argument("DynamicsConfig: step_size must be positive");
  if (!(assortment >= 0.0 && assortment <= 1.0)) throw std::invalid_argument("DynamicsConfig: assortment must lie in [0, 1]");
  if (!(mutation >= 0.0 && mutation <= 1.0)) throw std::invalid_argument("DynamicsConfig: mutation must lie in [0, 1]");
  if (!(selection_intensity > 0.0 && selection_intensity <= 1.0))
    throw std::invalid_argument("DynamicsConfig: selection_intensity must lie in (0, 1]");
  if (!(convergence_tol > 0.0)) throw std::invalid_argument("DynamicsConfig: convergence_tol must be positive");
  if (kind == DynamicsKind::Moran && population_size < 2)
    throw std::invalid_argument("DynamicsConfig: population_size must be at least 2");
}

namespace {

void require_symmetric(const MatrixGame& game, std::size_t dim) {
  if (!game.symmetric()) throw std::invalid_argument("population dynamics need a symmetric game");
  if (game.rows() != dim) throw std::invalid_argument("population state dimension does not match the game");
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Clamp and renormalize when numerical drift leaves the simplex.
std::vector<double> project(std::vector<double> x) {
  bool clamped = false;
  for (double& v : x)
    if (v < 0.0) {
      v = 0.0;
      clamped = true;
    }
  const double total = std::accumulate(x.begin(), x.end(), 0.0);
  if (clamped || std::abs(total - 1.0) > 1e-12)
    for (double& v : x) v /= total;
  return x;
}

double l1(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += std::abs(a[i] - b[i]);
  return d;
}

// Poincare-section recurrence test. A hyperplane through an early trajectory
// point, normal to the flow there, is fixed once; each upward crossing is
// compared with the previous one. Successive crossings that coincide within
// `return_tol`, after an excursion of at least `min_amplitude`, mark a
// periodic orbit.
class CycleDetector {
 public:
  static constexpr std::uint64_t kArmStep = 200;
  static constexpr double kReturnTol = 1e-4;
  static constexpr double kMinAmplitude = 0.05;

  void arm(std::span<const double> point, std::span<const double> direction) {
    const double norm = std::sqrt(std::inner_product(direction.begin(), direction.end(), direction.begin(), 0.0));
    if (norm == 0.0) return;
    anchor_.assign(point.begin(), point.end());
    normal_.assign(direction.begin(), direction.end());
    for (double& v : normal_) v /= norm;
    armed_ = true;
    prev_side_ = side(point);
  }

  bool armed() const { return armed_; }

  /// Feed the next state; returns true on a detected cycle.
  bool observe(std::span<const double> prev, std::span<const double> next) {
    if (!armed_) return false;
    if (last_cross_) excursion_ = std::max(excursion_, l1(next, *last_cross_));
    const double s = side(next);
    bool cycle = false;
    if (prev_side_ < 0.0 && s >= 0.0) {
      const double theta = -prev_side_ / (s - prev_side_);
      std::vector<double> cross(next.size());
      for (std::size_t i = 0; i < cross.size(); ++i) cross[i] = prev[i] + theta * (next[i] - prev[i]);
      if (last_cross_ && excursion_ >= kMinAmplitude && l1(cross, *last_cross_) < kReturnTol) cycle = true;
      last_cross_ = std::move(cross);
      excursion_ = 0.0;
    }
    prev_side_ = s;
    return cycle;
  }

 private:
  double side(std::span<const double> x) const {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - anchor_[i]) * normal_[i];
    return s;
  }

  bool armed_ = false;
  std::vector<double> anchor_, normal_;
  double prev_side_ = 0.0;
  std::optional<std::vector<double>> last_cross_;
  double excursion_ = 0.0;
};

template <class Step, class Change>
Trajectory iterate(const PopulationState& x0, const DynamicsConfig& config, double dt, Step step, Change change) {
  Trajectory traj;
  traj.points.push_back({0.0, x0});
  std::vector<double> x = x0.vector();
  CycleDetector cycles;
  std::uint64_t n = 0;
  double t = 0.0;
  traj.terminal = Termination::MaxSteps;
  while (true) {
    const std::vector<double> delta = change(x);
    if (max_abs(delta) < config.convergence_tol) {
      traj.terminal = Termination::Converged;
      break;
    }
    if (n >= config.max_steps) break;
    if (n == CycleDetector::kArmStep) cycles.arm(x, delta);
    std::vector<double> next = step(x);
    ++n;
    t = static_cast<double>(n) * dt;
    const bool cycle = cycles.observe(x, next);
    x = std::move(next);
    if (config.record_every != 0 && n % config.record_every == 0) traj.points.push_back({t, PopulationState(x)});
    if (cycle) {
      traj.terminal = Termination::CycleDetected;
      break;
    }
  }
  if (traj.points.back().time != t) traj.points.push_back({t, PopulationState(x)});
  traj.steps = n;
  return traj;
}

}  // namespace

std::vector<double> fitness(const MatrixGame& game, const PopulationState& x, double assortment) {
  require_symmetric(game, x.size());
  const std::size_t n = x.size();
  std::vector<double> f(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double random_match = 0.0;
    for (std::size_t j = 0; j < n; ++j) random_match += x[j] * game.row_payoff(i, j);
    f[i] = assortment * game.row_payoff(i, i) + (1.0 - assortment) * random_match;
  }
  return f;
}

std::vector<double> replicator_flow(const MatrixGame& game, std::span<const double> x, double assortment) {
  const std::size_t n = x.size();
  std::vector<double> f(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double random_match = 0.0;
    for (std::size_t j = 0; j < n; ++j) random_match += x[j] * game.row_payoff(i, j);
    f[i] = assortment * game.row_payoff(i, i) + (1.0 - assortment) * random_match;
  }
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += x[i] * f[i];
  std::vector<double> dx(n);
  for (std::size_t i = 0; i < n; ++i) dx[i] = x[i] * (f[i] - mean);
  return dx;
}

namespace {

std::vector<double> rk4(const MatrixGame& game, const std::vector<double>& x, double h, double e) {
  const std::size_t n = x.size();
  auto axpy = [&](const std::vector<double>& k, double a) {
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + a * k[i];
    return y;
  };
  const auto k1 = replicator_flow(game, x, e);
  const auto k2 = replicator_flow(game, axpy(k1, h / 2), e);
  const auto k3 = replicator_flow(game, axpy(k2, h / 2), e);
  const auto k4 = replicator_flow(game, axpy(k3, h), e);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return project(std::move(y));
}

std::vector<double> map_once(const MatrixGame& game, const std::vector<double>& x, double e, double shift) {
  const std::size_t n = x.size();
  std::vector<double> f(n);
  for (std::size_t i = 0; i < n; ++i) {
    double random_match = 0.0;
    for (std::size_t j = 0; j < n; ++j) random_match += x[j] * game.row_payoff(i, j);
    f[i] = e * game.row_payoff(i, i) + (1.0 - e) * random_match + shift;
  }
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += x[i] * f[i];
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = x[i] * f[i] / mean;
  return project(std::move(y));
}

}  // namespace

PopulationState replicator_ode_step(const MatrixGame& game, const PopulationState& x, const DynamicsConfig& config) {
  config.validate();
  require_symmetric(game, x.size());
  return PopulationState(rk4(game, x.vector(), config.step_size, config.assortment));
}

Trajectory integrate_replicator(const MatrixGame& game, const PopulationState& x0, const DynamicsConfig& config) {
  config.validate();
  require_symmetric(game, x0.size());
  const double h = config.step_size;
  const double e = config.assortment;
  return iterate(
      x0, config, h, [&](const std::vector<double>& x) { return rk4(game, x, h, e); },
      [&](const std::vector<double>& x) { return replicator_flow(game, x, e); });
}

double map_payoff_shift(const MatrixGame& game) { return 1.0 - game.min_payoff(); }

PopulationState replicator_map_step(const MatrixGame& game, const PopulationState& x, const DynamicsConfig& config) {
  config.validate();
  require_symmetric(game, x.size());
  return PopulationState(map_once(game, x.vector(), config.assortment, map_payoff_shift(game)));
}

Trajectory iterate_replicator_map(const MatrixGame& game, const PopulationState& x0, const DynamicsConfig& config) {
  config.validate();
  require_symmetric(game, x0.size());
  const double shift = map_payoff_shift(game);
  const double e = config.assortment;
  auto step = [&](const std::vector<double>& x) { return map_once(game, x, e, shift); };
  Trajectory traj = iterate(x0, config, 1.0, step, [&](const std::vector<double>& x) {
    std::vector<double> y = step(x);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] -= x[i];
    return y;
  });
  traj.payoff_shift = shift;
  return traj;
}

std::vector<std::size_t> counts_from_shares(const PopulationState& x, std::size_t n) {
  std::vector<std::size_t> counts(x.size());
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double exact = x[i] * static_cast<double>(n);
    counts[i] = static_cast<std::size_t>(std::floor(exact));
    assigned += counts[i];
    remainders.emplace_back(exact - std::floor(exact), i);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t k = 0; assigned < n; ++k, ++assigned) ++counts[remainders[k % remainders.size()].second];
  return counts;
}

ConvergenceResult run_to_convergence(const MatrixGame& game, const PopulationState& x0, const DynamicsConfig& config) {
  config.validate();
  switch (config.kind) {
    case DynamicsKind::ReplicatorOde: {
      Trajectory t = integrate_replicator(game, x0, config);
      PopulationState end = t.final_state();
      return {std::move(end), std::move(t)};
    }
    case DynamicsKind::ReplicatorMap: {
      Trajectory t = iterate_replicator_map(game, x0, config);
      PopulationState end = t.final_state();
      return {std::move(end), std::move(t)};
    }
    case DynamicsKind::Moran: {
      require_symmetric(game, x0.size());
      const auto counts = counts_from_shares(x0, config.population_size);
      const MoranResult r = moran_run(game, counts, config, config.seed);
      auto shares = [&](const std::vector<std::size_t>& c) {
        std::vector<double> s(c.size());
        for (std::size_t i = 0; i < c.size(); ++i) s[i] = static_cast<double>(c[i]) / static_cast<double>(config.population_size);
        return PopulationState(std::move(s));
      };
      Trajectory t;
      t.points.push_back({0.0, shares(counts)});
      t.steps = r.steps;
      if (r.steps > 0) t.points.push_back({static_cast<double>(r.steps), shares(r.counts)});
      t.terminal = r.absorbed ? Termination::Converged : Termination::MaxSteps;
      PopulationState end = r.absorbed ? PopulationState::vertex(x0.size(), *r.absorbed) : shares(r.counts);
      return {std::move(end), std::move(t)};
    }
  }
  throw std::logic_error("run_to_convergence: unknown dynamics kind");
}

}  // namespace egt
