// Exact long-run payoffs of a noisy repeated match.
//
// The pair of automaton states is a finite Markov chain. Each joint state
// carries an expected stage reward per player and an expected joint-outcome
// indicator vector. Limit-of-means payoffs are the absorption-weighted
// stationary averages of the closed communicating classes reachable from the
// initial pair; discounted payoffs solve (I - delta P) V = r.

#include "egtlab/repeated.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <map>
#include <queue>

namespace egt {

namespace {

struct JointChain {
  std::vector<std::pair<std::size_t, std::size_t>> states;  // index 0 is the initial pair
  Eigen::MatrixXd transition;
  // columns: payoff a, payoff b, CC, CD, DC, DD
  Eigen::MatrixXd reward;
};

constexpr Eigen::Index kRewardCols = 6;

JointChain build_chain(const StrategyAutomaton& a, const StrategyAutomaton& b, const RepeatedGameParams& params) {
  JointChain chain;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> index;
  struct Edge {
    std::size_t from, to;
    double p;
  };
  std::vector<Edge> edges;
  std::vector<std::array<double, kRewardCols>> rewards;

  auto intern = [&](std::pair<std::size_t, std::size_t> s, std::queue<std::size_t>& q) {
    auto [it, inserted] = index.emplace(s, chain.states.size());
    if (inserted) {
      chain.states.push_back(s);
      rewards.push_back({});
      q.push(it->second);
    }
    return it->second;
  };

  std::queue<std::size_t> frontier;
  intern({a.initial(), b.initial()}, frontier);
  while (!frontier.empty()) {
    const std::size_t from = frontier.front();
    frontier.pop();
    const auto [sa, sb] = chain.states[from];
    const AutomatonState& st_a = a.state(sa);
    const AutomatonState& st_b = b.state(sb);
    const bool insincere_a = st_a.intent == Action::Defect && st_a.apology == ApologyRule::Always;
    const bool insincere_b = st_b.intent == Action::Defect && st_b.apology == ApologyRule::Always;

    auto error_prob = [&](const AutomatonState& st, bool err) {
      if (st.intent == Action::Defect) return err ? 0.0 : 1.0;
      return err ? params.epsilon : 1.0 - params.epsilon;
    };
    auto exposure_prob = [&](bool insincere, bool exposed) {
      if (!insincere) return exposed ? 0.0 : 1.0;
      return exposed ? params.reliability : 1.0 - params.reliability;
    };

    for (int mask = 0; mask < 16; ++mask) {
      const RoundNoise noise{(mask & 1) != 0, (mask & 2) != 0, (mask & 4) != 0, (mask & 8) != 0};
      const double p = error_prob(st_a, noise.error_a) * error_prob(st_b, noise.error_b) *
                       exposure_prob(insincere_a, noise.exposed_a) * exposure_prob(insincere_b, noise.exposed_b);
      if (p == 0.0) continue;
      const RoundResult r = play_round(a, sa, b, sb, params, noise);
      auto& rw = rewards[from];
      rw[0] += p * r.a.payoff;
      rw[1] += p * r.b.payoff;
      rw[2 + outcome_index(r.a.executed, r.b.executed)] += p;
      const std::size_t to = intern({r.a.next_state, r.b.next_state}, frontier);
      edges.push_back({from, to, p});
    }
  }

  const auto n = static_cast<Eigen::Index>(chain.states.size());
  chain.transition = Eigen::MatrixXd::Zero(n, n);
  for (const Edge& e : edges)
    chain.transition(static_cast<Eigen::Index>(e.from), static_cast<Eigen::Index>(e.to)) += e.p;
  chain.reward.resize(n, kRewardCols);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index c = 0; c < kRewardCols; ++c) chain.reward(i, c) = rewards[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];
  return chain;
}

// Tarjan's strongly connected components on the positive-probability graph.
std::vector<int> components(const Eigen::MatrixXd& p, int& count) {
  const auto n = static_cast<int>(p.rows());
  std::vector<int> comp(n, -1), low(n, 0), order(n, -1), stack;
  std::vector<bool> on_stack(n, false);
  int counter = 0;
  count = 0;
  // iterative DFS: frame = (node, next neighbour to look at)
  for (int root = 0; root < n; ++root) {
    if (order[root] >= 0) continue;
    std::vector<std::pair<int, int>> frames{{root, 0}};
    order[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      auto& [v, next] = frames.back();
      if (next < n) {
        const int w = next++;
        if (p(v, w) <= 0.0) continue;
        if (order[w] < 0) {
          order[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], order[w]);
        }
        continue;
      }
      if (low[v] == order[v]) {
        int w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = count;
        } while (w != v);
        ++count;
      }
      const int done = v;
      frames.pop_back();
      if (!frames.empty()) low[frames.back().first] = std::min(low[frames.back().first], low[done]);
    }
  }
  return comp;
}

MatchOutcome to_outcome(const Eigen::RowVectorXd& values) {
  MatchOutcome out;
  out.payoff_a = values(0);
  out.payoff_b = values(1);
  for (int i = 0; i < 4; ++i) out.outcome_distribution[static_cast<std::size_t>(i)] = values(2 + i);
  return out;
}

MatchOutcome limit_of_means(const JointChain& chain) {
  const Eigen::MatrixXd& p = chain.transition;
  const auto n = static_cast<int>(p.rows());
  int ncomp = 0;
  const std::vector<int> comp = components(p, ncomp);

  std::vector<bool> closed(static_cast<std::size_t>(ncomp), true);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (p(i, j) > 0.0 && comp[i] != comp[j]) closed[static_cast<std::size_t>(comp[i])] = false;

  std::vector<int> classes;
  for (int c = 0; c < ncomp; ++c)
    if (closed[static_cast<std::size_t>(c)]) classes.push_back(c);

  // per-class stationary average of the reward columns
  std::vector<Eigen::RowVectorXd> class_value;
  for (int c : classes) {
    std::vector<int> members;
    for (int i = 0; i < n; ++i)
      if (comp[i] == c) members.push_back(i);
    const auto m = static_cast<Eigen::Index>(members.size());
    Eigen::VectorXd pi;
    if (m == 1) {
      pi = Eigen::VectorXd::Ones(1);
    } else {
      Eigen::MatrixXd a(m, m);
      for (Eigen::Index r = 0; r < m; ++r)
        for (Eigen::Index s = 0; s < m; ++s)
          a(r, s) = p(members[static_cast<std::size_t>(s)], members[static_cast<std::size_t>(r)]) - (r == s ? 1.0 : 0.0);
      a.row(m - 1).setOnes();
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
      rhs(m - 1) = 1.0;
      pi = a.fullPivLu().solve(rhs);
    }
    Eigen::RowVectorXd v = Eigen::RowVectorXd::Zero(kRewardCols);
    for (Eigen::Index r = 0; r < m; ++r) v += pi(r) * chain.reward.row(members[static_cast<std::size_t>(r)]);
    class_value.push_back(v);
  }

  // absorption weights from the initial pair (index 0)
  std::vector<double> weight(classes.size(), 0.0);
  const auto home = std::find(classes.begin(), classes.end(), comp[0]);
  if (home != classes.end()) {
    weight[static_cast<std::size_t>(home - classes.begin())] = 1.0;
  } else if (classes.size() == 1) {
    weight[0] = 1.0;
  } else {
    std::vector<int> transient;
    std::vector<int> position(static_cast<std::size_t>(n), -1);
    for (int i = 0; i < n; ++i)
      if (!closed[static_cast<std::size_t>(comp[i])]) {
        position[static_cast<std::size_t>(i)] = static_cast<int>(transient.size());
        transient.push_back(i);
      }
    const auto t = static_cast<Eigen::Index>(transient.size());
    const auto k = static_cast<Eigen::Index>(classes.size());
    Eigen::MatrixXd lhs = Eigen::MatrixXd::Identity(t, t);
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(t, k);
    for (Eigen::Index r = 0; r < t; ++r) {
      const int i = transient[static_cast<std::size_t>(r)];
      for (int j = 0; j < n; ++j) {
        if (p(i, j) <= 0.0) continue;
        if (position[static_cast<std::size_t>(j)] >= 0) {
          lhs(r, position[static_cast<std::size_t>(j)]) -= p(i, j);
        } else {
          const auto c = std::find(classes.begin(), classes.end(), comp[j]) - classes.begin();
          rhs(r, c) += p(i, j);
        }
      }
    }
    const Eigen::MatrixXd h = lhs.partialPivLu().solve(rhs);
    double total = 0.0;
    for (Eigen::Index c = 0; c < k; ++c) total += h(position[0], c);
    for (Eigen::Index c = 0; c < k; ++c) weight[static_cast<std::size_t>(c)] = h(position[0], c) / total;
  }

  Eigen::RowVectorXd v = Eigen::RowVectorXd::Zero(kRewardCols);
  for (std::size_t c = 0; c < classes.size(); ++c)
    if (weight[c] != 0.0) v += weight[c] * class_value[c];
  return to_outcome(v);
}

MatchOutcome discounted(const JointChain& chain, double delta) {
  const auto n = chain.transition.rows();
  const Eigen::MatrixXd lhs = Eigen::MatrixXd::Identity(n, n) - delta * chain.transition;
  const Eigen::MatrixXd values = lhs.partialPivLu().solve(chain.reward);
  return to_outcome((1.0 - delta) * values.row(0));
}

}  // namespace

MatchOutcome long_run_payoff(const StrategyAutomaton& a, const StrategyAutomaton& b, const RepeatedGameParams& params) {
  params.validate();
  if (a.size() * b.size() > kMaxJointStates)
    throw UnsupportedSizeError("long_run_payoff: joint state space exceeds " + std::to_string(kMaxJointStates));
  const JointChain chain = build_chain(a, b, params);
  return params.continuation == Continuation::LimitOfMeans ? limit_of_means(chain)
                                                           : discounted(chain, params.discount);
}

}  // namespace egt
