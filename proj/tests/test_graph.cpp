#include <gtest/gtest.h>

#include <sstream>

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

TEST(BuildGraph, PathThree) {
  const auto g = build_graph({{0, 1}, {1, 2}}, {0, 2});
  EXPECT_EQ(g.vertex_count(), 3u);
  EXPECT_EQ(g.edge_count(), 2u);
  EXPECT_EQ(g.boundary(), (std::vector<Vertex>{0, 2}));
  EXPECT_EQ(g.interior(), (std::vector<Vertex>{1}));
  EXPECT_EQ(g.max_degree(), 2u);
  EXPECT_TRUE(g.adjacent(0, 1));
  EXPECT_FALSE(g.adjacent(0, 2));
  EXPECT_EQ(g.boundary_index(2), 1u);
  EXPECT_EQ(g.interior_index(1), 0u);
  EXPECT_EQ(g.boundary_index(1), BoundaryGraph::npos);
}

TEST(BuildGraph, SparseLabelsAreCompacted) {
  const auto g = build_graph({{10, 20}, {20, 30}}, {10, 30});
  EXPECT_EQ(g.labels(), (std::vector<VertexId>{10, 20, 30}));
  EXPECT_TRUE(g.is_boundary(0));
  EXPECT_FALSE(g.is_boundary(1));
}

TEST(BuildGraph, BoundaryEdgesAllowed) {
  // Triangle 0-1-2 with 0,1 on the boundary and 2 interior.
  EXPECT_NO_THROW(build_graph({{0, 1}, {1, 2}, {0, 2}}, {0, 1}));
}

TEST(BuildGraph, Rejections) {
  EXPECT_EQ(code_of([] { build_graph({{0, 1}, {2, 3}}, {0, 3}); }), ErrorCode::NotConnected);
  EXPECT_EQ(code_of([] { build_graph({{0, 1}, {1, 2}}, {0}); }), ErrorCode::BoundaryTooSmall);
  EXPECT_EQ(code_of([] { build_graph({{0, 1}, {1, 2}}, {0, 1, 2}); }), ErrorCode::BoundaryConditionViolated);
  EXPECT_EQ(code_of([] { build_graph({{0, 1}, {0, 1}, {1, 2}}, {0, 2}); }), ErrorCode::MultiEdgeOrLoop);
  EXPECT_EQ(code_of([] { build_graph({{0, 1}, {1, 0}, {1, 2}}, {0, 2}); }), ErrorCode::MultiEdgeOrLoop);
  EXPECT_EQ(code_of([] { build_graph({{0, 0}, {0, 1}, {1, 2}}, {0, 2}); }), ErrorCode::MultiEdgeOrLoop);
  EXPECT_EQ(code_of([] { build_graph({}, {0, 2}); }), ErrorCode::InvalidInput);
  EXPECT_EQ(code_of([] { build_graph({{0, 1}, {1, 2}}, {0, 7}); }), ErrorCode::InvalidInput);
  // 0-1-2-3-4 with boundary {0,1,2,4}: 1 touches only 0 and 2, neither of
  // which touches the interior.
  EXPECT_EQ(code_of([] { build_graph({{0, 1}, {1, 2}, {2, 3}, {3, 4}}, {0, 1, 2, 4}); }),
            ErrorCode::BoundaryConditionViolated);
}

TEST(BuildGraph, GridCornersAreAdmissible) {
  const auto g = generate("grid:3:outer");
  EXPECT_EQ(g.boundary().size(), 8u);
  EXPECT_EQ(g.interior(), (std::vector<Vertex>{4}));
  EXPECT_EQ(g.max_degree(), 4u);
  // A pendant boundary vertex hanging off a boundary vertex that touches
  // the interior also counts as a corner.
  EXPECT_NO_THROW(build_graph({{0, 1}, {1, 2}, {2, 3}, {3, 4}}, {0, 1, 3, 4}));
}

TEST(GraphFile, RoundTrip) {
  const auto g = generate("torus-grid:3");
  std::stringstream ss;
  write_graph(ss, g);
  const auto h = read_graph(ss);
  EXPECT_EQ(h.labels(), g.labels());
  EXPECT_EQ(h.edges(), g.edges());
  EXPECT_EQ(h.boundary(), g.boundary());
  ASSERT_TRUE(h.genus_hint().has_value());
  EXPECT_EQ(*h.genus_hint(), 1);
}

TEST(GraphFile, CommentsAndErrors) {
  std::istringstream ok("# a path\ne 0 1  # first\ne 1 2\nb 0\nb 2\nb 2\n");
  EXPECT_EQ(read_graph(ok).boundary().size(), 2u);

  std::istringstream bad_tag("x 0 1\n");
  EXPECT_EQ(code_of([&] { read_graph(bad_tag); }), ErrorCode::ParseError);
  std::istringstream trailing("e 0 1 2\n");
  EXPECT_EQ(code_of([&] { read_graph(trailing); }), ErrorCode::ParseError);
  std::istringstream isolated("v 9\ne 0 1\ne 1 2\nb 0\nb 2\n");
  EXPECT_EQ(code_of([&] { read_graph(isolated); }), ErrorCode::NotConnected);
}

TEST(Generators, Shapes) {
  const auto star = generate("star:5");
  EXPECT_EQ(star.vertex_count(), 5u);
  EXPECT_EQ(star.boundary().size(), 4u);
  EXPECT_EQ(star.max_degree(), 4u);

  const auto grid = generate("grid:5:outer");
  EXPECT_EQ(grid.vertex_count(), 25u);
  EXPECT_EQ(grid.boundary().size(), 16u);
  EXPECT_EQ(grid.max_degree(), 4u);

  const auto ends = generate("grid:4x2:ends");
  EXPECT_EQ(ends.vertex_count(), 8u);
  EXPECT_EQ(ends.boundary().size(), 4u);

  const auto cyc = generate("cycle:6:2");
  EXPECT_EQ(cyc.boundary(), (std::vector<Vertex>{0, 2, 4}));

  const auto torus = generate("torus-grid:4");
  EXPECT_EQ(torus.edge_count(), 32u);
  EXPECT_EQ(torus.boundary().size(), 4u);
}

TEST(Generators, RandomTreeIsTreeWithLeafBoundary) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto t = random_tree(15, seed);
    EXPECT_EQ(t.edge_count(), 14u);
    for (Vertex v = 0; v < t.vertex_count(); ++v) EXPECT_EQ(t.is_boundary(v), t.degree(v) == 1);
  }
  const auto a = random_tree(20, 5), b = random_tree(20, 5);
  EXPECT_EQ(a.edges(), b.edges());
}

TEST(Generators, BadSpecs) {
  for (const char* spec : {"grid:5", "grid:5:inner", "star:x", "blob:3", "tree:fixed:5:1", "path:2", "grid:2:outer"})
    EXPECT_EQ(code_of([&] { generate(spec); }), ErrorCode::BadSpec) << spec;
  // A 4x2 grid with the outer boundary has no interior at all.
  EXPECT_THROW(generate("grid:4x2:outer"), Error);
}
