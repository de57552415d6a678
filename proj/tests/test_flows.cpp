#include <gtest/gtest.h>

#include <cmath>

#include "steklov/steklov.hpp"
#include "support.hpp"

using namespace steklov;

namespace {

// Exhaustive minimum over the probability simplex on a lattice of step 1/steps,
// for a star/tree where every pair has a unique path: returns min ||x||.
template <class Norm>
double simplex_grid_min(std::size_t dim, int steps, Norm&& norm) {
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> c(dim, 0);
  auto rec = [&](auto&& self, std::size_t i, int left) -> void {
    if (i + 1 == dim) {
      c[i] = left;
      std::vector<double> mu(dim);
      for (std::size_t j = 0; j < dim; ++j) mu[j] = static_cast<double>(c[j]) / steps;
      best = std::min(best, norm(mu));
      return;
    }
    for (int a = 0; a <= left; ++a) {
      c[i] = a;
      self(self, i + 1, left - a);
    }
  };
  rec(rec, 0, steps);
  return best;
}

}  // namespace

TEST(Paths, EnumerationCounts) {
  // K4 with two boundary vertices: 5 simple paths between each of the 6 pairs.
  const auto k4 = build_graph({{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}, {0, 1});
  EXPECT_EQ(enumerate_paths(k4).size(), 30u);
  EXPECT_EQ(enumerate_paths(k4, 0).size(), 6u);
  EXPECT_EQ(enumerate_paths(k4, std::nullopt, k4.boundary()).size(), 5u);

  const auto c6 = generate("cycle:6:2");
  const auto ps = enumerate_paths(c6, std::nullopt, c6.boundary());
  EXPECT_EQ(ps.size(), 6u);
  EXPECT_EQ(ps.between(0, 2).size(), 2u);
  EXPECT_EQ(ps.between(4, 0).size(), 2u);
  for (std::size_t i = 0; i < ps.size(); ++i) EXPECT_LT(ps.path(i).front(), ps.path(i).back());
}

TEST(Paths, GuardsAndValidation) {
  EXPECT_THROW(enumerate_paths(generate("grid:4:outer")), Error);
  EXPECT_NO_THROW(enumerate_paths(generate("grid:4:outer"), 2));
  const auto g = generate("path:4");
  PathSet ps;
  EXPECT_EQ(ps.add(g, {0, 1, 2}), 0u);
  EXPECT_EQ(ps.add(g, {2, 1, 0}), 0u);  // reversal is the same path
  EXPECT_THROW(ps.add(g, {0, 2}), Error);
  EXPECT_THROW(ps.add(g, {0}), Error);
  EXPECT_THROW(ps.add(g, {0, 1, 0}), Error);
}

TEST(Congestion, HandComputed) {
  const auto g = generate("star:5");  // centre 0, leaves 1..4
  PathSet ps(g, {{1, 0, 2}, {3, 0, 4}});
  Flow f(ps, {1.0, 0.5});
  EXPECT_DOUBLE_EQ(congestion(f, 5), 1.5 * 1.5 + 1 + 1 + 0.25 + 0.25);
  // Two crossing paths share the centre; ordered pairs count both ways.
  EXPECT_DOUBLE_EQ(intersection_number(f), 2 * 1.0 * 0.5);
  EXPECT_DOUBLE_EQ(f.between(2, 1), 1.0);
  EXPECT_THROW(Flow(ps, {1.0}), Error);
  EXPECT_THROW(Flow(ps, {1.0, -1.0}), Error);
}

TEST(Congestion, DominatesIntersectionNumber) {
  Rng rng(8);
  for (int trial = 0; trial < 300; ++trial) {
    const auto g = testing_support::random_graph(4 + rng.below(6), 0.3, rng);
    const auto all = enumerate_paths(g);
    std::vector<double> v(all.size());
    for (auto& x : v) x = rng.uniform() < 0.5 ? 0.0 : rng.uniform(0.0, 2.0);
    Flow f(all, v);
    EXPECT_LE(intersection_number(f), congestion(f, g.vertex_count()));
  }
}

TEST(Spreading, EpsilonByHand) {
  // P3, unit weight: the only pair is at distance 3; (2*3)/2^2 / sqrt(3).
  const auto g = generate("path:3");
  const auto e = epsilon_r(g, VertexWeight::constant(3, 1.0), 2);
  EXPECT_NEAR(e.value, 1.5 / std::sqrt(3.0), 1e-15);
  EXPECT_EQ(e.argmin, (std::vector<Vertex>{0, 2}));
  EXPECT_THROW(epsilon_r(g, VertexWeight::constant(3, 1.0), 1), Error);
  EXPECT_THROW(epsilon_r(g, VertexWeight::constant(3, 0.0), 2), Error);
}

TEST(Spreading, ScaleInvariant) {
  const auto g = generate("cycle:6:2");
  VertexWeight w({0.3, 1.0, 0.2, 0.7, 0.9, 0.1});
  std::vector<double> scaled(w.values());
  for (double& x : scaled) x *= 7.5;
  EXPECT_NEAR(epsilon_r(g, w, 2).value, epsilon_r(g, VertexWeight(scaled), 2).value, 1e-14);
}

TEST(Spreading, SymmetrizationNeverHurts) {
  const auto g = generate("cycle:6:2");
  const std::vector<Vertex> rot{2, 3, 4, 5, 0, 1};  // rotation by two preserves B
  Rng rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> v(6);
    for (auto& x : v) x = rng.uniform(0.01, 1.0);
    VertexWeight w(v);
    const auto s = symmetrize_weight(w, rot);
    EXPECT_GE(epsilon_r(g, s, 2).value, epsilon_r(g, w, 2).value - 1e-12);
  }
}

TEST(FlowProgram, Matrices) {
  const auto g = generate("star:4");
  const auto prog = build_flow_program(g, 2, enumerate_paths(g));
  EXPECT_EQ(prog.pairs.size(), 3u);
  EXPECT_EQ(prog.subsets.size(), 3u);
  EXPECT_EQ(prog.paths.size(), 3u);  // only leaf-to-leaf paths survive
  EXPECT_EQ(prog.P.rows(), 3);
  EXPECT_DOUBLE_EQ(prog.P.sum(), 9.0);
  EXPECT_DOUBLE_EQ(prog.R.maxCoeff(), 0.5);
  PathSet partial(g, {{1, 0, 2}});
  EXPECT_THROW(build_flow_program(g, 2, partial), Error);
}

TEST(MinCongestion, PathThreeClosedForm) {
  const auto g = generate("path:3");
  const auto sol = min_congestion_flow(g, 2, enumerate_paths(g));
  EXPECT_NEAR(sol.dual_objective, std::sqrt(3.0) / 2.0, 1e-9);
  EXPECT_NEAR(sol.value, std::sqrt(3.0), 1e-9);
  ASSERT_EQ(sol.mu.subsets.size(), 1u);
  EXPECT_NEAR(sol.mu.mass[0], 1.0, 1e-12);
}

TEST(MinCongestion, StarAgainstSimplexGrid) {
  const auto g = generate("star:4");  // K_{1,3}
  const auto sol = min_congestion_flow(g, 2, enumerate_paths(g));
  // Brute force over mu on the three leaf pairs {1,2},{1,3},{2,3}: every pair
  // has one path through the centre.
  const double grid = simplex_grid_min(3, 300, [](const std::vector<double>& mu) {
    const double c = 1.0, l1 = mu[0] + mu[1], l2 = mu[0] + mu[2], l3 = mu[1] + mu[2];
    return 0.5 * std::sqrt(c * c + l1 * l1 + l2 * l2 + l3 * l3);
  });
  EXPECT_NEAR(sol.dual_objective, grid, 1e-9);
  EXPECT_NEAR(sol.dual_objective, std::sqrt(7.0 / 12.0), 1e-9);
}

TEST(MinCongestion, IsAMuFlow) {
  Rng rng(10);
  for (int trial = 0; trial < 15; ++trial) {
    const auto g = testing_support::random_graph(5 + rng.below(4), 0.3, rng, 3);
    const std::size_t r = 2 + rng.below(2);
    if (r > g.boundary().size()) continue;
    const auto sol = min_congestion_flow(g, r, enumerate_paths(g, std::nullopt, g.boundary()));
    sol.mu.validate(g);
    for (std::size_t i = 0; i < g.boundary().size(); ++i)
      for (std::size_t j = i + 1; j < g.boundary().size(); ++j) {
        const Vertex u = g.boundary()[i], v = g.boundary()[j];
        EXPECT_NEAR(sol.flow.between(u, v), sol.mu.pair_probability(u, v), 1e-9);
      }
    const double scale = 2.0 / static_cast<double>(r * r);
    EXPECT_NEAR(sol.dual_objective, scale * sol.value, 1e-9);
  }
}

TEST(MinCongestion, ImplicitMatchesEnumerated) {
  Rng rng(21);
  for (int trial = 0; trial < 15; ++trial) {
    const auto g = testing_support::random_graph(5 + rng.below(5), 0.3, rng, 3);
    const auto enumerated = min_congestion_flow(g, 2, enumerate_paths(g, std::nullopt, g.boundary()));
    const auto implicit = min_congestion_flow(g, 2);
    EXPECT_NEAR(enumerated.dual_objective, implicit.dual_objective, 1e-7 * std::max(1.0, enumerated.dual_objective));
  }
}

TEST(Duality, SmallInstances) {
  for (const char* spec : {"path:3", "star:4", "cycle:6:2", "grid:4x2:ends"}) {
    const auto g = generate(spec);
    const auto dg = duality_gap(g, 2);
    EXPECT_LE(dg.gap, 1e-4 * std::max(1.0, dg.dual)) << spec;
    // The primal weight's exact spreading constant is the program value.
    EXPECT_NEAR(dg.primal_solution.epsilon, dg.primal, 1e-6) << spec;
  }
}

TEST(Duality, PrimalWeightBeatsRandomWeights) {
  const auto g = generate("cycle:6:2");
  const double best = max_spreading_weight(g, 2, enumerate_paths(g, std::nullopt, g.boundary())).epsilon;
  Rng rng(6);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> v(6);
    for (auto& x : v) x = rng.uniform();
    EXPECT_LE(epsilon_r(g, VertexWeight(v), 2).value, best + 1e-9);
  }
}

TEST(Duality, WeakDualityOnRandomGraphs) {
  Rng rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const auto g = testing_support::random_graph(5 + rng.below(4), 0.35, rng, 3);
    const auto sw = max_spreading_weight(g, 2);
    const auto sol = min_congestion_flow(g, 2);
    EXPECT_LE(sw.epsilon, sol.dual_objective + 1e-9);
    EXPECT_NEAR(sw.epsilon, sol.dual_objective, 1e-5 * std::max(1.0, sol.dual_objective));
  }
}
