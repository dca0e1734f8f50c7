#include "egtlab/repeated.hpp"
#include "egtlab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace egt {

namespace {

// Row player's stage payoff, indexed by outcome_index(own, partner).
constexpr std::array<double, 4> kStagePayoff = {2.0, 0.0, 3.0, 1.0};

PlayerRound resolve(const AutomatonState& st, bool error, bool exposure_draw) {
  PlayerRound p;
  p.intent = st.intent;
  p.executed = (st.intent == Action::Cooperate && error) ? Action::Defect : st.intent;
  const bool sincere = st.intent == Action::Cooperate;
  if (p.executed == Action::Defect) {
    p.apologized = st.apology == ApologyRule::Always ||
                   (st.apology == ApologyRule::OnOwnErrorDefection && sincere);
  }
  p.exposed = p.apologized && !sincere && exposure_draw;
  return p;
}

ApologyStatus perceive(const PlayerRound& partner, AcceptanceRule observer) {
  if (!partner.apologized) return ApologyStatus::None;
  if (partner.exposed) return ApologyStatus::Exposed;
  return observer == AcceptanceRule::BelieveUnexposed ? ApologyStatus::Believed : ApologyStatus::None;
}

}  // namespace

void RepeatedGameParams::validate() const {
  if (!(epsilon >= 0.0 && epsilon < 1.0)) throw std::invalid_argument("RepeatedGameParams: epsilon must lie in [0, 1)");
  if (!(apology_cost >= 0.0)) throw std::invalid_argument("RepeatedGameParams: apology_cost must be >= 0");
  if (!(reliability >= 0.0 && reliability <= 1.0))
    throw std::invalid_argument("RepeatedGameParams: reliability must lie in [0, 1]");
  if (continuation == Continuation::Discounted && !(discount > 0.0 && discount < 1.0))
    throw std::invalid_argument("RepeatedGameParams: discount must lie in (0, 1)");
  if (horizon < 1) throw std::invalid_argument("RepeatedGameParams: horizon must be >= 1");
}

RoundNoise draw_noise(Rng& rng, const RepeatedGameParams& params) {
  // always four draws per round so the stream position never depends on play
  RoundNoise n;
  n.error_a = rng.uniform() < params.epsilon;
  n.error_b = rng.uniform() < params.epsilon;
  n.exposed_a = rng.uniform() < params.reliability;
  n.exposed_b = rng.uniform() < params.reliability;
  return n;
}

RoundResult play_round(const StrategyAutomaton& a, std::size_t state_a, const StrategyAutomaton& b,
                       std::size_t state_b, const RepeatedGameParams& params, const RoundNoise& noise) {
  const AutomatonState& sa = a.state(state_a);
  const AutomatonState& sb = b.state(state_b);
  RoundResult r{resolve(sa, noise.error_a, noise.exposed_a), resolve(sb, noise.error_b, noise.exposed_b)};

  r.a.seen = perceive(r.b, sa.acceptance);
  r.b.seen = perceive(r.a, sb.acceptance);

  r.a.payoff = kStagePayoff[outcome_index(r.a.executed, r.b.executed)] - (r.a.apologized ? params.apology_cost : 0.0);
  r.b.payoff = kStagePayoff[outcome_index(r.b.executed, r.a.executed)] - (r.b.apologized ? params.apology_cost : 0.0);

  r.a.next_state = a.next(state_a, r.a.executed, r.b.executed, r.a.seen);
  r.b.next_state = b.next(state_b, r.b.executed, r.a.executed, r.b.seen);
  return r;
}

EmpiricalOutcome simulate_match(const StrategyAutomaton& a, const StrategyAutomaton& b,
                                const RepeatedGameParams& params, std::uint64_t seed, const TraceSink& trace) {
  params.validate();
  Rng rng(seed);
  const std::uint64_t rounds = params.horizon;
  const std::uint64_t batches = std::min<std::uint64_t>(100, rounds);
  std::vector<double> batch_a(batches, 0.0), batch_b(batches, 0.0);
  std::vector<std::uint64_t> batch_n(batches, 0);
  std::array<std::uint64_t, 4> counts{};

  std::size_t sa = a.initial();
  std::size_t sb = b.initial();
  double total_a = 0.0, total_b = 0.0;
  for (std::uint64_t t = 0; t < rounds; ++t) {
    const RoundResult r = play_round(a, sa, b, sb, params, draw_noise(rng, params));
    if (trace) trace(TraceRow{t, r});
    const std::uint64_t k = t * batches / rounds;
    batch_a[k] += r.a.payoff;
    batch_b[k] += r.b.payoff;
    ++batch_n[k];
    total_a += r.a.payoff;
    total_b += r.b.payoff;
    ++counts[outcome_index(r.a.executed, r.b.executed)];
    sa = r.a.next_state;
    sb = r.b.next_state;
  }

  EmpiricalOutcome out;
  out.rounds = rounds;
  out.payoff_a = total_a / static_cast<double>(rounds);
  out.payoff_b = total_b / static_cast<double>(rounds);
  for (std::size_t i = 0; i < 4; ++i) out.outcome_distribution[i] = static_cast<double>(counts[i]) / static_cast<double>(rounds);

  if (batches >= 2) {
    auto batch_stderr = [&](const std::vector<double>& sums) {
      double mean = 0.0;
      std::vector<double> means(batches);
      for (std::size_t k = 0; k < batches; ++k) {
        means[k] = sums[k] / static_cast<double>(batch_n[k]);
        mean += means[k];
      }
      mean /= static_cast<double>(batches);
      double ss = 0.0;
      for (double m : means) ss += (m - mean) * (m - mean);
      return std::sqrt(ss / static_cast<double>(batches - 1) / static_cast<double>(batches));
    };
    out.stderr_a = batch_stderr(batch_a);
    out.stderr_b = batch_stderr(batch_b);
  }
  return out;
}

MatrixGame induced_matrix(const std::vector<StrategyAutomaton>& roster, const RepeatedGameParams& params) {
  if (roster.empty()) throw std::invalid_argument("induced_matrix: roster is empty");
  const std::size_t n = roster.size();
  std::vector<std::vector<double>> u(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const MatchOutcome m = long_run_payoff(roster[i], roster[j], params);
      u[i][j] = m.payoff_a;
      if (i != j) u[j][i] = m.payoff_b;
    }
  }
  std::vector<std::string> labels;
  for (const auto& s : roster) labels.push_back(s.name());
  return MatrixGame::symmetric_from("induced_repeated_pd", std::move(labels), u);
}

DeterrenceResult deterrence_threshold(const RepeatedGameParams& params, const StrategyAutomaton& incumbent,
                                      const StrategyAutomaton& invader, const std::vector<double>& k_grid) {
  if (k_grid.empty()) throw std::invalid_argument("deterrence_threshold: cost grid is empty");
  if (!std::is_sorted(k_grid.begin(), k_grid.end()))
    throw std::invalid_argument("deterrence_threshold: cost grid must be sorted ascending");

  DeterrenceResult out;
  for (double k : k_grid) {
    RepeatedGameParams p = params;
    p.apology_cost = k;
    const double self = long_run_payoff(incumbent, incumbent, p).payoff_a;
    const double invading = long_run_payoff(invader, incumbent, p).payoff_a;
    out.margins.emplace_back(self, invading);
    if (!out.threshold && self > invading + 1e-12) out.threshold = k;
  }
  return out;
}

}  // namespace egt
