#include <gtest/gtest.h>

#include "steklov/steklov.hpp"
#include "support.hpp"

using namespace steklov;

TEST(SemiMetric, PathExamples) {
  const auto g = generate("path:3");
  const auto m1 = semi_metric(g, VertexWeight::constant(3, 1.0));
  EXPECT_DOUBLE_EQ(m1(0, 2), 3.0);
  EXPECT_DOUBLE_EQ(m1(0, 0), 1.0);
  const auto m2 = semi_metric(g, VertexWeight({1.0, 5.0, 1.0}));
  EXPECT_DOUBLE_EQ(m2(0, 2), 7.0);
  EXPECT_DOUBLE_EQ(m2(2, 0), 7.0);
  const auto m0 = semi_metric(g, VertexWeight::constant(3, 0.0));
  for (Vertex u = 0; u < 3; ++u)
    for (Vertex v = 0; v < 3; ++v) EXPECT_EQ(m0(u, v), 0.0);
}

TEST(SemiMetric, MatchesSimplePathEnumeration) {
  Rng rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 4 + rng.below(6);
    const auto g = testing_support::random_graph(n, 0.3, rng);
    std::vector<double> w(n);
    for (auto& x : w) x = rng.uniform() < 0.2 ? 0.0 : rng.uniform(0.0, 3.0);
    const auto m = semi_metric(g, VertexWeight(w));
    for (Vertex u = 0; u < n; ++u)
      for (Vertex v = 0; v < n; ++v) {
        if (u == v) {
          EXPECT_DOUBLE_EQ(m(u, v), w[u]);
          continue;
        }
        EXPECT_NEAR(m(u, v), testing_support::brute_distance(g, w, u, v), 1e-12);
      }
  }
}

TEST(SemiMetric, Axioms) {
  Rng rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 5 + rng.below(10);
    const auto g = testing_support::random_graph(n, 0.2, rng);
    std::vector<double> w(n);
    for (auto& x : w) x = rng.uniform();
    const auto m = semi_metric(g, VertexWeight(w));
    for (Vertex x = 0; x < n; ++x)
      for (Vertex y = 0; y < n; ++y) {
        EXPECT_GE(m(x, y), 0.0);
        EXPECT_EQ(m(x, y), m(y, x));
        for (Vertex z = 0; z < n; ++z) EXPECT_LE(m(x, y), m(x, z) + m(z, y) + 1e-12);
      }
  }
}

TEST(SemiMetric, BallsDiametersAndSetDistance) {
  const auto g = generate("path:5");
  const auto m = semi_metric(g, VertexWeight::constant(5, 1.0));
  EXPECT_EQ(ball(m, 0, 2.0), (std::vector<Vertex>{0, 1}));
  EXPECT_EQ(ball(m, 2, 0.5), (std::vector<Vertex>{}));
  const std::vector<Vertex> s{0, 2};
  EXPECT_DOUBLE_EQ(diameter(m, s), 3.0);
  EXPECT_DOUBLE_EQ(spread_diameter(m, s), 3.0);
  const std::vector<Vertex> one{3};
  EXPECT_DOUBLE_EQ(diameter(m, one), 1.0);
  EXPECT_DOUBLE_EQ(spread_diameter(m, one), 0.0);
  EXPECT_DOUBLE_EQ(distance_to_set(m, 4, s), 3.0);
  EXPECT_DOUBLE_EQ(distance_to_set(m, 2, s), 0.0);
}

TEST(VertexWeight, Validation) {
  EXPECT_THROW(VertexWeight({1.0, -0.5}), Error);
  EXPECT_THROW(VertexWeight({1.0, std::nan("")}), Error);
  VertexWeight w({3.0, 4.0});
  EXPECT_DOUBLE_EQ(w.norm2(), 5.0);
  EXPECT_DOUBLE_EQ(w.normalized().norm2(), 1.0);
  EXPECT_TRUE(VertexWeight::constant(4, 0.0).is_zero());
  try {
    VertexWeight::constant(4, 0.0).normalized();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroWeight);
  }
}

TEST(Combinatorics, EnumeratesAllSubsetsInOrder) {
  std::vector<std::vector<std::size_t>> seen;
  for_each_combination(5, 3, [&](const std::vector<std::size_t>& c) { seen.push_back(c); });
  ASSERT_EQ(seen.size(), 10u);
  EXPECT_DOUBLE_EQ(binomial(5, 3), 10.0);
  EXPECT_EQ(seen.front(), (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(seen.back(), (std::vector<std::size_t>{2, 3, 4}));
  EXPECT_TRUE(std::is_sorted(seen.begin(), seen.end()));
}

TEST(Random, ReproducibleAndInRange) {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) {
    const double x = a.uniform();
    EXPECT_EQ(x, b.uniform());
    EXPECT_GE(x, 0.0);
    EXPECT_LT(x, 1.0);
    EXPECT_LT(a.below(7), 7u);
    b.below(7);
  }
  std::vector<int> v{1, 2, 3, 4, 5, 6};
  Rng c(9);
  c.shuffle(v);
  std::sort(v.begin(), v.end());
  EXPECT_EQ(v, (std::vector<int>{1, 2, 3, 4, 5, 6}));
  EXPECT_NE(mix_seed(1, 0), mix_seed(1, 1));
}
