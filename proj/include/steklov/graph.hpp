#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "steklov/error.hpp"

namespace steklov {

/// Internal vertex index, dense in [0, vertex_count()).
using Vertex = std::size_t;
/// External vertex id as it appears in graph files and edge lists.
using VertexId = std::uint64_t;

struct Edge {
  Vertex u;
  Vertex v;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Simple connected graph with a distinguished boundary B and interior V - B.
///
/// Only constructible through build_graph, so every instance satisfies:
/// no loops or multi-edges, connected, |B| >= 2, and every boundary vertex
/// has an interior neighbour or is a corner whose neighbours all do (edges
/// inside B are allowed).
class BoundaryGraph {
 public:
  std::size_t vertex_count() const noexcept { return adjacency_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const std::vector<Vertex>& neighbors(Vertex x) const { return adjacency_.at(x); }
  std::size_t degree(Vertex x) const { return adjacency_.at(x).size(); }
  bool adjacent(Vertex x, Vertex y) const {
    const auto& a = adjacency_.at(x);
    return std::binary_search(a.begin(), a.end(), y);
  }

  const std::vector<Vertex>& boundary() const noexcept { return boundary_; }
  const std::vector<Vertex>& interior() const noexcept { return interior_; }
  bool is_boundary(Vertex x) const { return is_boundary_.at(x) != 0; }
  /// Position of x inside boundary(), or npos for interior vertices.
  std::size_t boundary_index(Vertex x) const { return local_index_.at(x).first; }
  std::size_t interior_index(Vertex x) const { return local_index_.at(x).second; }

  std::size_t max_degree() const noexcept { return max_degree_; }
  std::optional<int> genus_hint() const noexcept { return genus_hint_; }
  void set_genus_hint(std::optional<int> g) { genus_hint_ = g; }

  VertexId label(Vertex x) const { return labels_.at(x); }
  const std::vector<VertexId>& labels() const noexcept { return labels_; }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  friend BoundaryGraph build_graph(std::span<const std::pair<VertexId, VertexId>>,
                                   std::span<const VertexId>, std::span<const VertexId>,
                                   std::optional<int>);
  BoundaryGraph() = default;

  std::vector<std::vector<Vertex>> adjacency_;
  std::vector<Edge> edges_;
  std::vector<char> is_boundary_;
  std::vector<Vertex> boundary_;
  std::vector<Vertex> interior_;
  std::vector<std::pair<std::size_t, std::size_t>> local_index_;
  std::vector<VertexId> labels_;
  std::size_t max_degree_ = 0;
  std::optional<int> genus_hint_;
};

/// Validate and build a graph with boundary. External ids are mapped to dense
/// indices in increasing id order; `extra_vertices` lets callers declare
/// vertices that carry no edge (which then fails the connectivity check).
inline BoundaryGraph build_graph(std::span<const std::pair<VertexId, VertexId>> edge_list,
                                 std::span<const VertexId> boundary,
                                 std::span<const VertexId> extra_vertices = {},
                                 std::optional<int> genus_hint = std::nullopt) {
  if (edge_list.empty()) throw Error(ErrorCode::InvalidInput, "edge list is empty");
  if (boundary.empty()) throw Error(ErrorCode::InvalidInput, "boundary is empty");
  if (genus_hint && *genus_hint < 0) throw Error(ErrorCode::InvalidInput, "negative genus");

  std::set<VertexId> ids(extra_vertices.begin(), extra_vertices.end());
  for (const auto& [a, b] : edge_list) {
    ids.insert(a);
    ids.insert(b);
  }
  for (VertexId b : boundary) {
    if (!ids.contains(b))
      throw Error(ErrorCode::InvalidInput, "boundary vertex " + std::to_string(b) + " is not a vertex");
  }

  BoundaryGraph g;
  g.labels_.assign(ids.begin(), ids.end());
  std::map<VertexId, Vertex> index;
  for (Vertex i = 0; i < g.labels_.size(); ++i) index[g.labels_[i]] = i;
  const std::size_t n = g.labels_.size();

  std::set<Edge> seen;
  for (const auto& [a, b] : edge_list) {
    if (a == b) throw Error(ErrorCode::MultiEdgeOrLoop, "loop at vertex " + std::to_string(a));
    Vertex u = index[a], v = index[b];
    if (u > v) std::swap(u, v);
    if (!seen.insert(Edge{u, v}).second)
      throw Error(ErrorCode::MultiEdgeOrLoop,
                  "repeated edge " + std::to_string(a) + "-" + std::to_string(b));
  }
  g.edges_.assign(seen.begin(), seen.end());
  g.adjacency_.assign(n, {});
  for (const auto& e : g.edges_) {
    g.adjacency_[e.u].push_back(e.v);
    g.adjacency_[e.v].push_back(e.u);
  }
  for (auto& a : g.adjacency_) std::sort(a.begin(), a.end());

  std::vector<char> reached(n, 0);
  std::vector<Vertex> stack{0};
  reached[0] = 1;
  std::size_t reached_count = 1;
  while (!stack.empty()) {
    Vertex x = stack.back();
    stack.pop_back();
    for (Vertex y : g.adjacency_[x]) {
      if (!reached[y]) {
        reached[y] = 1;
        ++reached_count;
        stack.push_back(y);
      }
    }
  }
  if (reached_count != n) throw Error(ErrorCode::NotConnected, "graph is not connected");

  g.is_boundary_.assign(n, 0);
  for (VertexId b : boundary) g.is_boundary_[index[b]] = 1;
  for (Vertex x = 0; x < n; ++x) (g.is_boundary_[x] ? g.boundary_ : g.interior_).push_back(x);
  if (g.boundary_.size() < 2)
    throw Error(ErrorCode::BoundaryTooSmall, "boundary needs at least two vertices");

  // Every boundary vertex must touch the interior, except "corners": boundary
  // vertices whose neighbours all lie in B and each touch the interior
  // (the corners of an outer-cycle grid boundary).
  if (g.interior_.empty())
    throw Error(ErrorCode::BoundaryConditionViolated, "interior is empty");
  auto touches_interior = [&](Vertex x) {
    const auto& nb = g.adjacency_[x];
    return std::any_of(nb.begin(), nb.end(), [&](Vertex y) { return !g.is_boundary_[y]; });
  };
  for (Vertex b : g.boundary_) {
    if (touches_interior(b)) continue;
    const auto& nb = g.adjacency_[b];
    if (!std::all_of(nb.begin(), nb.end(), touches_interior))
      throw Error(ErrorCode::BoundaryConditionViolated,
                  "boundary vertex " + std::to_string(g.labels_[b]) + " is not adjacent to the interior");
  }

  g.local_index_.assign(n, {BoundaryGraph::npos, BoundaryGraph::npos});
  for (std::size_t i = 0; i < g.boundary_.size(); ++i) g.local_index_[g.boundary_[i]].first = i;
  for (std::size_t i = 0; i < g.interior_.size(); ++i) g.local_index_[g.interior_[i]].second = i;
  for (const auto& a : g.adjacency_) g.max_degree_ = std::max(g.max_degree_, a.size());
  g.genus_hint_ = genus_hint;
  return g;
}

inline BoundaryGraph build_graph(const std::vector<std::pair<VertexId, VertexId>>& edge_list,
                                 const std::vector<VertexId>& boundary) {
  return build_graph(std::span<const std::pair<VertexId, VertexId>>(edge_list),
                     std::span<const VertexId>(boundary));
}

/// Parse the line-oriented graph format:
///   v <id> | e <id> <id> | b <id> | genus <int>, with `#` comments.
inline BoundaryGraph read_graph(std::istream& in) {
  std::vector<VertexId> vertices, boundary;
  std::vector<std::pair<VertexId, VertexId>> edges;
  std::optional<int> genus;
  std::string line;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& msg) {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": " + msg);
  };
  auto read_id = [&](std::istringstream& ss) {
    long long value = -1;
    if (!(ss >> value) || value < 0) fail("expected a nonnegative integer id");
    return static_cast<VertexId>(value);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::string tag;
    if (!(ss >> tag)) continue;
    if (tag == "v") {
      vertices.push_back(read_id(ss));
    } else if (tag == "e") {
      VertexId a = read_id(ss);
      VertexId b = read_id(ss);
      edges.emplace_back(a, b);
    } else if (tag == "b") {
      boundary.push_back(read_id(ss));
    } else if (tag == "genus") {
      int g = -1;
      if (!(ss >> g) || g < 0) fail("expected a nonnegative genus");
      genus = g;
    } else {
      fail("unknown record '" + tag + "'");
    }
    std::string rest;
    if (ss >> rest) fail("trailing token '" + rest + "'");
  }
  std::sort(boundary.begin(), boundary.end());
  boundary.erase(std::unique(boundary.begin(), boundary.end()), boundary.end());
  return build_graph(edges, boundary, vertices, genus);
}

inline void write_graph(std::ostream& out, const BoundaryGraph& g) {
  if (g.genus_hint()) out << "genus " << *g.genus_hint() << '\n';
  for (Vertex x = 0; x < g.vertex_count(); ++x) out << "v " << g.label(x) << '\n';
  for (const auto& e : g.edges()) out << "e " << g.label(e.u) << ' ' << g.label(e.v) << '\n';
  for (Vertex b : g.boundary()) out << "b " << g.label(b) << '\n';
}

}  // namespace steklov
