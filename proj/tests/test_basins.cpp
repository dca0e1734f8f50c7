#include <gtest/gtest.h>

#include <array>
#include <cmath>

#include "egtlab/basins.hpp"
#include "egtlab/rng.hpp"

using namespace egt;

namespace {

DynamicsConfig ode() { return DynamicsConfig{}; }

double half_width(const Interval& ci) { return 0.5 * (ci.high - ci.low); }

}  // namespace

TEST(SampleSimplex, DimensionOne) {
  Rng rng(1);
  EXPECT_EQ(sample_simplex(1, rng).vector(), std::vector<double>{1.0});
  EXPECT_THROW(sample_simplex(0, rng), std::invalid_argument);
}

TEST(SampleSimplex, FlatDirichletMoments) {
  // flat Dirichlet(1,1,1): mean 1/3, var 1/18
  Rng rng(2);
  const int n = 100000;
  std::array<double, 3> mean{}, sq{};
  for (int i = 0; i < n; ++i) {
    const auto x = sample_simplex(3, rng);
    for (int k = 0; k < 3; ++k) {
      mean[k] += x[k];
      sq[k] += x[k] * x[k];
    }
  }
  for (int k = 0; k < 3; ++k) {
    EXPECT_NEAR(mean[k] / n, 1.0 / 3.0, 0.01);
    EXPECT_NEAR(sq[k] / n - std::pow(mean[k] / n, 2), 1.0 / 18.0, 0.005);
  }
}

TEST(SampleSimplex, MarginalOfTwoIsUniform) {
  Rng rng(3);
  int below = 0;
  for (int i = 0; i < 40000; ++i) below += sample_simplex(2, rng)[0] < 0.25;
  EXPECT_NEAR(below / 40000.0, 0.25, 0.01);
}

TEST(Wilson, KnownValues) {
  const Interval a = wilson_interval(50, 100);
  EXPECT_NEAR(a.low, 0.4038, 1e-4);
  EXPECT_NEAR(a.high, 0.5962, 1e-4);
  const Interval zero = wilson_interval(0, 10);
  EXPECT_EQ(zero.low, 0.0);
  EXPECT_NEAR(zero.high, 0.2775, 1e-4);
  const Interval all = wilson_interval(10, 10);
  EXPECT_NEAR(all.low, 0.7225, 1e-4);
  EXPECT_NEAR(all.high, 1.0, 1e-12);
}

TEST(Library, Validation) {
  AttractorLibrary lib = AttractorLibrary::vertices(stag_hunt());
  EXPECT_EQ(lib.size(), 2u);
  EXPECT_EQ(*lib.find("Hare"), 1u);
  EXPECT_FALSE(lib.find("nope"));
  EXPECT_THROW(lib.add("close", PopulationState({0.9999, 0.0001})), std::invalid_argument);
  EXPECT_THROW(lib.add("dim", PopulationState::barycenter(3)), std::invalid_argument);
  EXPECT_THROW(lib.add("r", PopulationState({0.5, 0.5}), 0.0), std::invalid_argument);
  EXPECT_EQ(*lib.classify(PopulationState({0.0004, 0.9996})), 1u);
  EXPECT_FALSE(lib.classify(PopulationState({0.5, 0.5})));
}

TEST(EdgeRestPoint, NashDemand) {
  const MatrixGame g = nash_demand(10, {3, 5, 7});
  const auto p = edge_rest_point(g, 0, 2);
  ASSERT_TRUE(p);
  // demand 3 always earns 3, demand 7 earns 7 x_3: equal at x_3 = 3/7
  EXPECT_NEAR((*p)[0], 3.0 / 7.0, 1e-12);
  EXPECT_NEAR((*p)[2], 4.0 / 7.0, 1e-12);
  EXPECT_EQ((*p)[1], 0.0);
  EXPECT_FALSE(edge_rest_point(pd(), 0, 1));
  EXPECT_THROW(edge_rest_point(g, 1, 1), std::invalid_argument);
}

TEST(Basins, PrisonersDilemmaAllDefect) {
  const auto r = estimate_basins(pd(), ode(), AttractorLibrary::vertices(pd()), 500, 7);
  EXPECT_EQ(r.find("Defect")->count, 500u);
  EXPECT_EQ(r.unclassified, 0u);
  EXPECT_EQ(r.total, 500u);
}

TEST(Basins, StagHuntTwoThirds) {
  const auto r = estimate_basins(stag_hunt(), ode(), AttractorLibrary::vertices(stag_hunt()), 10000, 42);
  const auto* hare = r.find("Hare");
  ASSERT_NE(hare, nullptr);
  EXPECT_NEAR(hare->fraction, 2.0 / 3.0, 0.02);
  EXPECT_EQ(r.unclassified, 0u);
  EXPECT_NEAR(hare->fraction + r.find("Stag")->fraction, 1.0, 1e-12);
}

TEST(Basins, NashDemandOrdering) {
  const MatrixGame g = nash_demand(10, {3, 5, 7});
  AttractorLibrary lib = AttractorLibrary::vertices(g);
  lib.add("3/7", *edge_rest_point(g, 0, 2));
  const auto r = estimate_basins(g, ode(), lib, 2000, 2024);
  EXPECT_GT(r.find("5")->fraction, r.find("3/7")->fraction);
  EXPECT_EQ(r.find("3")->count, 0u);
  EXPECT_EQ(r.find("7")->count, 0u);
}

TEST(Basins, ThreadCountDoesNotChangeResults) {
  const MatrixGame g = nash_demand(10, {3, 5, 7});
  AttractorLibrary lib = AttractorLibrary::vertices(g);
  lib.add("3/7", *edge_rest_point(g, 0, 2));
  const auto one = estimate_basins(g, ode(), lib, 600, 5, 1);
  const auto four = estimate_basins(g, ode(), lib, 600, 5, 4);
  ASSERT_EQ(one.attractors.size(), four.attractors.size());
  for (std::size_t i = 0; i < one.attractors.size(); ++i) EXPECT_EQ(one.attractors[i].count, four.attractors[i].count);
}

TEST(Basins, IntervalShrinksWithSamples) {
  const auto lib = AttractorLibrary::vertices(stag_hunt());
  const auto a = estimate_basins(stag_hunt(), ode(), lib, 2000, 9);
  const auto b = estimate_basins(stag_hunt(), ode(), lib, 4000, 9);
  const double ratio = half_width(b.find("Hare")->ci) / half_width(a.find("Hare")->ci);
  EXPECT_NEAR(ratio, 1.0 / std::sqrt(2.0), 0.05);
}

TEST(Basins, IntervalsCoverTheTrueBasin) {
  // 20 seeds at 95%: expect at most 3 misses (P(>3) ~ 1.6%)
  const auto lib = AttractorLibrary::vertices(stag_hunt());
  int misses = 0;
  for (std::uint64_t seed = 100; seed < 120; ++seed) {
    const auto r = estimate_basins(stag_hunt(), ode(), lib, 1000, seed);
    const auto ci = r.find("Hare")->ci;
    misses += !(ci.low <= 2.0 / 3.0 && 2.0 / 3.0 <= ci.high);
  }
  EXPECT_LE(misses, 3);
}

TEST(Basins, Errors) {
  const auto lib = AttractorLibrary::vertices(stag_hunt());
  EXPECT_THROW(estimate_basins(stag_hunt(), ode(), lib, 0, 1), std::invalid_argument);
  EXPECT_THROW(estimate_basins(nash_demand(10, {3, 5, 7}), ode(), lib, 10, 1), std::invalid_argument);
}

TEST(Sweep, RowsPerPoint) {
  std::vector<StrategyAutomaton> roster{preset("APOLOGIZER"), preset("EXPLOITER"), preset("ALLD")};
  RepeatedGameParams base;
  base.epsilon = 0.05;
  base.continuation = Continuation::Discounted;
  base.discount = 0.9;
  DynamicsConfig c;
  c.step_size = 0.1;
  c.max_steps = 200000;
  const auto rows = basin_sweep({{2.0, 0.0}, {2.0, 1.0}}, base, roster, c, 200, 3);
  ASSERT_EQ(rows.size(), 8u);
  double total = 0;
  for (std::size_t i = 0; i < 4; ++i) total += rows[i].fraction;
  EXPECT_NEAR(total, 1.0, 1e-12);
  EXPECT_EQ(rows[3].label, "unclassified");
  EXPECT_EQ(rows[0].label, "APOLOGIZER");
  EXPECT_EQ(rows[4].reliability, 1.0);
  EXPECT_THROW(basin_sweep({}, base, roster, c, 10, 1), std::invalid_argument);
}
