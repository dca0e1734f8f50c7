#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "egtlab/basins.hpp"
#include "egtlab/dynamics.hpp"
#include "egtlab/rng.hpp"

using namespace egt;

namespace {

PopulationState two(double x) { return PopulationState({x, 1.0 - x}); }

DynamicsConfig ode(double e = 0.0) {
  DynamicsConfig c;
  c.assortment = e;
  return c;
}

DynamicsConfig map_config(double e = 0.0) {
  DynamicsConfig c;
  c.kind = DynamicsKind::ReplicatorMap;
  c.assortment = e;
  return c;
}

std::vector<MatrixGame> battery() {
  return {pd(), stag_hunt(), nash_demand(10, {3, 5, 7}), coordination(), ultimatum_minigame(),
          public_goods_binary({}).induced_game()};
}

void expect_on_simplex(const PopulationState& x) {
  double total = 0;
  for (double v : x.shares()) {
    EXPECT_GE(v, 0.0);
    total += v;
  }
  EXPECT_NEAR(total, 1.0, 1e-9);
}

}  // namespace

TEST(PopulationState, Validation) {
  EXPECT_NO_THROW(PopulationState({0.2, 0.8}));
  EXPECT_THROW(PopulationState({0.2, 0.7}), std::invalid_argument);
  EXPECT_THROW(PopulationState({-0.1, 1.1}), std::invalid_argument);
  EXPECT_THROW(PopulationState({}), std::invalid_argument);
  EXPECT_EQ(PopulationState::vertex(3, 1).vector(), (std::vector<double>{0, 1, 0}));
  EXPECT_NEAR(PopulationState::barycenter(3)[2], 1.0 / 3.0, 1e-15);
  EXPECT_DOUBLE_EQ(PopulationState::vertex(3, 0).l1_distance(PopulationState::vertex(3, 2)), 2.0);
}

TEST(Config, Validation) {
  DynamicsConfig c;
  c.assortment = 1.5;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.step_size = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.selection_intensity = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.mutation = -0.1;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  EXPECT_EQ(parse_dynamics_kind("replicator-map"), DynamicsKind::ReplicatorMap);
  EXPECT_FALSE(parse_dynamics_kind("euler"));
}

TEST(Fitness, PrisonersDilemmaIdentity) {
  // f_C - f_D = 2e - 1 at every state
  for (double e : {0.0, 0.25, 0.5, 0.6, 1.0})
    for (double x : {0.0, 0.1, 0.5, 0.9, 1.0}) {
      const auto f = fitness(pd(), two(x), e);
      EXPECT_NEAR(f[0] - f[1], 2 * e - 1, 1e-14);
    }
  const auto full = fitness(pd(), two(0.3), 1.0);
  EXPECT_EQ(full[0], 2.0);
  EXPECT_EQ(full[1], 1.0);
}

TEST(Fitness, Errors) {
  EXPECT_THROW(fitness(pd(), PopulationState::barycenter(3), 0), std::invalid_argument);
  const MatrixGame asym("a", {"x", "y"}, {"x", "y"}, {{{1, 0}, {0, 0}}, {{0, 0}, {0, 0}}}, false);
  EXPECT_THROW(fitness(asym, two(0.5), 0), std::invalid_argument);
}

TEST(Replicator, FlowVanishesAtVerticesAndPureEquilibria) {
  for (const auto& g : battery())
    for (std::size_t i = 0; i < g.rows(); ++i) {
      const auto v = PopulationState::vertex(g.rows(), i);
      for (double d : replicator_flow(g, v.shares(), 0.0)) EXPECT_LT(std::abs(d), 1e-12);
      EXPECT_EQ(replicator_map_step(g, v, map_config()), v);
    }
}

TEST(Replicator, StagHuntRestPoint) {
  // f_S = f_H solved by hand: 3p = 2
  const auto f = fitness(stag_hunt(), two(2.0 / 3.0), 0.0);
  EXPECT_NEAR(f[0], f[1], 1e-12);
  const auto p = edge_rest_point(stag_hunt(), 0, 1);
  ASSERT_TRUE(p);
  EXPECT_NEAR((*p)[0], 2.0 / 3.0, 1e-9);
}

TEST(Replicator, StagHuntConvergence) {
  const auto low = run_to_convergence(stag_hunt(), two(0.5), ode());
  EXPECT_EQ(low.trajectory.terminal, Termination::Converged);
  EXPECT_LT(low.attractor.l1_distance(PopulationState::vertex(2, 1)), 1e-6);
  const auto high = run_to_convergence(stag_hunt(), two(0.8), ode());
  EXPECT_LT(high.attractor.l1_distance(PopulationState::vertex(2, 0)), 1e-6);
}

TEST(Replicator, CoordinationMidpointIsStationary) {
  const auto r = run_to_convergence(coordination(), two(0.5), ode());
  EXPECT_EQ(r.trajectory.terminal, Termination::Converged);
  EXPECT_EQ(r.trajectory.steps, 0u);
  EXPECT_NEAR(r.attractor[0], 0.5, 1e-15);
}

TEST(Replicator, PrisonersDilemmaWithAndWithoutAssortment) {
  Rng rng(4);
  for (int i = 0; i < 20; ++i) {
    const auto x0 = sample_simplex(2, rng);
    const auto d = run_to_convergence(pd(), x0, ode(0.0));
    EXPECT_LT(d.attractor.l1_distance(PopulationState::vertex(2, 1)), 1e-6);
    const auto c = run_to_convergence(pd(), x0, ode(0.6));
    EXPECT_LT(c.attractor.l1_distance(PopulationState::vertex(2, 0)), 1e-6);
  }
}

TEST(Replicator, PublicGoodsEndsInShirking) {
  const MatrixGame g = public_goods_binary({}).induced_game();
  const auto r = run_to_convergence(g, two(0.95), ode());
  EXPECT_LT(r.attractor.l1_distance(PopulationState::vertex(2, 1)), 1e-6);
}

TEST(Replicator, TrajectoryInvariants) {
  Rng rng(8);
  for (const auto& g : battery()) {
    const auto x0 = sample_simplex(g.rows(), rng);
    DynamicsConfig c = ode();
    c.max_steps = 3000;
    const auto t = integrate_replicator(g, x0, c);
    ASSERT_GE(t.points.size(), 1u);
    for (std::size_t i = 0; i < t.points.size(); ++i) {
      expect_on_simplex(t.points[i].state);
      if (i > 0) {
        EXPECT_GT(t.points[i].time, t.points[i - 1].time);
      }
    }
    const auto m = iterate_replicator_map(g, x0, map_config());
    for (const auto& p : m.points) expect_on_simplex(p.state);
  }
}

TEST(Replicator, RecordEvery) {
  DynamicsConfig c = ode();
  c.record_every = 0;
  const auto t = integrate_replicator(stag_hunt(), two(0.9), c);
  EXPECT_EQ(t.points.size(), 2u);
  c.record_every = 10;
  const auto u = integrate_replicator(stag_hunt(), two(0.9), c);
  EXPECT_EQ(u.final_state(), t.final_state());
  EXPECT_GT(u.points.size(), 2u);
}

TEST(Replicator, MaxStepsIsReported) {
  DynamicsConfig c = ode();
  c.max_steps = 5;
  const auto t = integrate_replicator(stag_hunt(), two(0.9), c);
  EXPECT_EQ(t.terminal, Termination::MaxSteps);
  EXPECT_EQ(t.steps, 5u);
}

TEST(Replicator, StepHalvingDoesNotMoveEndpoints) {
  Rng rng(21);
  for (const auto& g : battery()) {
    for (int s = 0; s < 5; ++s) {
      const auto x0 = sample_simplex(g.rows(), rng);
      DynamicsConfig a = ode();
      a.convergence_tol = 1e-12;
      DynamicsConfig b = a;
      b.step_size = a.step_size / 2;
      const auto ra = run_to_convergence(g, x0, a);
      const auto rb = run_to_convergence(g, x0, b);
      const auto lib = AttractorLibrary::vertices(g);
      EXPECT_EQ(lib.classify(ra.attractor), lib.classify(rb.attractor)) << g.name();
      EXPECT_LT(ra.attractor.l1_distance(rb.attractor), 1e-6) << g.name();
    }
  }
}

TEST(ReplicatorMap, PayoffShift) {
  EXPECT_EQ(map_payoff_shift(nash_demand(10, {3, 5, 7})), 1.0);
  EXPECT_EQ(map_payoff_shift(stag_hunt()), 1.0);
  const MatrixGame neg = MatrixGame::symmetric_from("n", {"a", "b"}, {{-2, 0}, {1, -1}});
  EXPECT_EQ(map_payoff_shift(neg), 3.0);
  const auto t = iterate_replicator_map(neg, two(0.3), map_config());
  EXPECT_EQ(t.payoff_shift, 3.0);
}

TEST(ReplicatorMap, DefectionGrowsMonotonically) {
  PopulationState x = two(0.9);
  for (int i = 0; i < 200; ++i) {
    const PopulationState y = replicator_map_step(pd(), x, map_config());
    EXPECT_LT(y[0], x[0]);
    x = y;
  }
}

TEST(ReplicatorMap, MonomorphicDemandFiveStays) {
  const auto x = PopulationState({0, 1, 0});
  EXPECT_EQ(replicator_map_step(nash_demand(10, {3, 5, 7}), x, map_config()), x);
}

TEST(ReplicatorMap, AgreesWithOdeOnAttractors) {
  Rng rng(12);
  for (const auto& g : battery()) {
    AttractorLibrary lib = AttractorLibrary::vertices(g, 1e-3);
    if (g.name() == "nash_demand") lib.add("3/7", *edge_rest_point(g, 0, 2));
    for (int s = 0; s < 20; ++s) {
      const auto x0 = sample_simplex(g.rows(), rng);
      const auto a = run_to_convergence(g, x0, ode());
      const auto b = run_to_convergence(g, x0, map_config());
      if (g.name() == "ultimatum_minigame") {
        // neutral among fair strategies: compare support only
        EXPECT_NEAR(a.attractor[2] + a.attractor[3], b.attractor[2] + b.attractor[3], 1e-3);
        continue;
      }
      EXPECT_EQ(lib.classify(a.attractor), lib.classify(b.attractor)) << g.name();
    }
  }
}

TEST(Cycles, RockPaperScissorsIsDetected) {
  // zero-sum RPS: closed orbits around the barycentre
  const MatrixGame rps = MatrixGame::symmetric_from("rps", {"R", "P", "S"}, {{0, -1, 1}, {1, 0, -1}, {-1, 1, 0}});
  const auto r = run_to_convergence(rps, PopulationState({0.5, 0.3, 0.2}), ode());
  EXPECT_EQ(r.trajectory.terminal, Termination::CycleDetected);
  // and a game with an attracting interior point is not a cycle
  const MatrixGame hd = MatrixGame::symmetric_from("hd", {"H", "D"}, {{-1, 2}, {0, 1}});
  const auto h = run_to_convergence(hd, two(0.1), ode());
  EXPECT_EQ(h.trajectory.terminal, Termination::Converged);
  EXPECT_NEAR(h.attractor[0], 0.5, 1e-6);
}

TEST(Moran, AbsorbedImmediatelyWhenMonomorphic) {
  DynamicsConfig c;
  c.kind = DynamicsKind::Moran;
  const auto r = moran_run(pd(), {0, 20}, c, 1);
  ASSERT_TRUE(r.absorbed);
  EXPECT_EQ(*r.absorbed, 1u);
  EXPECT_EQ(r.steps, 0u);
  EXPECT_THROW(moran_run(pd(), {0, 0}, c, 1), std::invalid_argument);
  EXPECT_THROW(moran_run(pd(), {1, 0}, c, 1), std::invalid_argument);
}

TEST(Moran, StepConservesPopulation) {
  DynamicsConfig c;
  c.kind = DynamicsKind::Moran;
  c.mutation = 0.1;
  Rng rng(5);
  std::vector<std::size_t> counts{4, 3, 3};
  for (int i = 0; i < 1000; ++i) {
    counts = moran_step(nash_demand(10, {3, 5, 7}), counts, c, rng);
    EXPECT_EQ(std::accumulate(counts.begin(), counts.end(), std::size_t{0}), 10u);
  }
}

TEST(Moran, NeutralFixationIsOneOverN) {
  const MatrixGame neutral = MatrixGame::symmetric_from("neutral", {"a", "b"}, {{1, 1}, {1, 1}});
  DynamicsConfig c;
  c.kind = DynamicsKind::Moran;
  const int runs = 20000;
  int fixed = 0;
  for (int i = 0; i < runs; ++i) {
    const auto r = moran_run(neutral, {1, 9}, c, Rng::stream(77, i).next());
    fixed += r.absorbed && *r.absorbed == 0;
  }
  const double p = 0.1, sigma = std::sqrt(p * (1 - p) / runs);
  EXPECT_NEAR(fixed / double(runs), p, 3 * sigma);
}

TEST(Moran, WeakSelectionApproachesNeutral) {
  DynamicsConfig c;
  c.kind = DynamicsKind::Moran;
  c.selection_intensity = 1e-4;
  const int runs = 20000;
  int fixed = 0;
  for (int i = 0; i < runs; ++i) fixed += *moran_run(pd(), {1, 9}, c, Rng::stream(78, i).next()).absorbed == 0;
  EXPECT_NEAR(fixed / double(runs), 0.1, 3 * std::sqrt(0.09 / runs));
}

TEST(Moran, CooperatorIsDisadvantaged) {
  DynamicsConfig c;
  c.kind = DynamicsKind::Moran;
  const int runs = 5000;
  int fixed = 0;
  for (int i = 0; i < runs; ++i) fixed += *moran_run(pd(), {1, 19}, c, Rng::stream(79, i).next()).absorbed == 0;
  EXPECT_LT(fixed / double(runs), 1.0 / 20);
}

TEST(Moran, DeterministicInSeed) {
  DynamicsConfig c;
  c.kind = DynamicsKind::Moran;
  const auto a = moran_run(stag_hunt(), {10, 10}, c, 5);
  const auto b = moran_run(stag_hunt(), {10, 10}, c, 5);
  EXPECT_EQ(a.counts, b.counts);
  EXPECT_EQ(a.steps, b.steps);
}

TEST(Moran, CountsFromShares) {
  EXPECT_EQ(counts_from_shares(PopulationState({0.5, 0.5}), 10), (std::vector<std::size_t>{5, 5}));
  const auto c = counts_from_shares(PopulationState::barycenter(3), 10);
  EXPECT_EQ(std::accumulate(c.begin(), c.end(), std::size_t{0}), 10u);
}
