#include <gtest/gtest.h>

#include "steklov/steklov.hpp"

using namespace steklov;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::InvalidInput;
}

}  // namespace

TEST(Grouping, WindowAndPremises) {
  const auto win = group_window(16, 2, 0.5);
  EXPECT_DOUBLE_EQ(win.lo, 1.0);
  EXPECT_DOUBLE_EQ(win.hi, 2.0);

  // 8 singletons, k = 2: four sets of two... first-fit closes a bin at size >= lo = 1.
  std::vector<std::vector<Vertex>> cores;
  for (Vertex x = 0; x < 8; ++x) cores.push_back({x});
  const auto sets = group_core_sets(cores, 16, 2, 0.5);
  ASSERT_EQ(sets.size(), 4u);
  std::set<Vertex> seen;
  for (const auto& s : sets) {
    EXPECT_GE(s.size(), 1u);
    EXPECT_LE(s.size(), 2u);
    for (Vertex x : s) EXPECT_TRUE(seen.insert(x).second);
  }

  EXPECT_EQ(code_of([&] { group_core_sets({{0, 1}}, 16, 2, 0.5); }), ErrorCode::Retry);             // core too big
  EXPECT_EQ(code_of([&] { group_core_sets({{0}, {1}, {2}}, 16, 2, 0.5); }), ErrorCode::Retry);     // too few
}

TEST(TestFunctions, TentsAndOverlap) {
  const auto g = generate("path:7");
  const auto m = semi_metric(g, VertexWeight::constant(7, 1.0));
  // eps = 4, alpha = 1: radius 2, neighbourhoods are d(x, S) <= 2, i.e. the set and its neighbours.
  const std::vector<std::vector<Vertex>> sets{{0}, {6}};
  const auto fam = build_test_functions(g, m, sets, 4.0, 1.0, VertexWeight::constant(7, 1.0), 2);
  EXPECT_DOUBLE_EQ(fam.radius, 2.0);
  EXPECT_DOUBLE_EQ(fam.functions(0, 0) + fam.functions(0, 1), 2.0);
  EXPECT_EQ(fam.neighborhoods[0].size(), 2u);
  // W of {0,1}: edges 0-1 (twice, once from each end) and 1-2, unit weight.
  EXPECT_DOUBLE_EQ(fam.all_w_values[0], 4.0 * 3);
  const auto a = audit_family(g, VertexWeight::constant(7, 1.0), fam, 2, 0.5);
  EXPECT_TRUE(a.supports_disjoint);
  EXPECT_TRUE(a.lipschitz);
  EXPECT_TRUE(a.energy_within_budget);
  EXPECT_TRUE(a.peak_on_sources);

  const std::vector<std::vector<Vertex>> close{{2}, {4}};
  EXPECT_EQ(code_of([&] { build_test_functions(g, m, close, 4.0, 1.0, VertexWeight::constant(7, 1.0), 2); }),
            ErrorCode::NeighborhoodsOverlap);
}

TEST(Certify, GridFiveIndependentlyRechecked) {
  const auto g = generate("grid:5:outer");
  CertifyOptions opt;
  opt.seed = 7;
  const auto c = certify_bound(g, 2, 0.5, opt);
  ASSERT_TRUE(c.certified) << c.failed_stage << ": " << c.failure;
  EXPECT_TRUE(c.verdict());
  EXPECT_EQ(c.r_nominal, 1u);
  EXPECT_EQ(c.r_used, 2u);

  // Re-derive everything the verdict depends on.
  const double sigma2 = generalized_steklov_eigenvalues(g)(1);
  EXPECT_NEAR(c.sigma_k, sigma2, 1e-9);
  const auto& F = c.family->functions;
  double max_r = 0.0;
  for (Eigen::Index i = 0; i < F.cols(); ++i) {
    double num = 0.0, den = 0.0;
    for (const auto& e : g.edges()) num += std::pow(F(e.u, i) - F(e.v, i), 2);
    for (Vertex b : g.boundary()) den += F(b, i) * F(b, i);
    ASSERT_GT(den, 0.0);
    max_r = std::max(max_r, num / den);
  }
  EXPECT_NEAR(max_r, c.max_rayleigh, 1e-12);
  EXPECT_LE(sigma2, 2.0 * max_r + 1e-10);
  const double rhs = 64.0 * 2 / 0.5 * 4.0 / 16.0 * std::pow(c.alpha / c.epsilon, 2);
  EXPECT_NEAR(rhs, c.rhs, 1e-9 * rhs);
  EXPECT_LE(max_r, rhs / 2.0);

  // Spreading constant of the reported weight, from scratch.
  EXPECT_NEAR(epsilon_r(g, c.weight, c.r_used).value, c.epsilon, 1e-12);
  EXPECT_NEAR(c.weight.norm2(), 1.0, 1e-12);

  // Disjoint supports, each touching B.
  for (Vertex x = 0; x < g.vertex_count(); ++x) {
    int nz = 0;
    for (Eigen::Index i = 0; i < F.cols(); ++i) nz += F(x, i) != 0.0;
    EXPECT_LE(nz, 1);
  }
}

TEST(Certify, Reproducible) {
  const auto g = generate("grid:6:outer");
  CertifyOptions opt;
  opt.seed = 3;
  const auto a = certify_bound(g, 2, 0.5, opt), b = certify_bound(g, 2, 0.5, opt);
  EXPECT_EQ(a.certified, b.certified);
  EXPECT_EQ(a.sigma_k, b.sigma_k);
  EXPECT_EQ(a.max_rayleigh, b.max_rayleigh);
  EXPECT_EQ(a.weight.values(), b.weight.values());
}

TEST(Certify, FallbackOutsideRange) {
  const auto g = generate("star:6");
  const auto c = certify_bound(g, 3, 0.5);  // 3 > delta|B|/4
  EXPECT_FALSE(c.certified);
  EXPECT_EQ(c.failed_stage, "precondition");
  EXPECT_DOUBLE_EQ(c.fallback_bound, 3.0 * 5.0);
  EXPECT_TRUE(c.fallback_holds);
  EXPECT_TRUE(c.verdict());
  EXPECT_THROW(certify_bound(g, 0, 0.5), Error);
  EXPECT_THROW(certify_bound(g, 2, 1.5), Error);
}
