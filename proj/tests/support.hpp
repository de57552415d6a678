#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <set>
#include <utility>
#include <vector>

#include "steklov/steklov.hpp"

namespace testing_support {

using steklov::BoundaryGraph;
using steklov::Rng;
using steklov::Vertex;
using steklov::VertexId;

/// Random connected simple graph on n vertices (random tree plus extra edges
/// with probability p) with a random admissible boundary. Retries until the
/// boundary has at least `min_boundary` vertices.
inline BoundaryGraph random_graph(std::size_t n, double p, Rng& rng, std::size_t min_boundary = 2) {
  for (;;) {
    std::set<std::pair<VertexId, VertexId>> edges;
    for (VertexId v = 1; v < n; ++v) {
      VertexId u = rng.below(v);
      edges.emplace(u, v);
    }
    for (VertexId u = 0; u < n; ++u)
      for (VertexId v = u + 1; v < n; ++v)
        if (rng.uniform() < p) edges.emplace(u, v);

    std::vector<std::vector<VertexId>> adj(n);
    for (auto [u, v] : edges) {
      adj[u].push_back(v);
      adj[v].push_back(u);
    }
    std::vector<char> in_b(n, 0);
    for (std::size_t v = 0; v < n; ++v) in_b[v] = rng.uniform() < 0.45;
    // Demote boundary vertices without an interior neighbour; interior never
    // shrinks, so a vertex kept here keeps its interior neighbour.
    for (std::size_t v = 0; v < n; ++v) {
      if (!in_b[v]) continue;
      bool ok = std::any_of(adj[v].begin(), adj[v].end(), [&](VertexId y) { return !in_b[y]; });
      if (!ok) in_b[v] = 0;
    }
    std::vector<VertexId> b;
    for (std::size_t v = 0; v < n; ++v)
      if (in_b[v]) b.push_back(v);
    if (b.size() < std::max<std::size_t>(2, min_boundary)) continue;
    std::vector<std::pair<VertexId, VertexId>> el(edges.begin(), edges.end());
    return steklov::build_graph(el, b);
  }
}

/// Brute-force vertex-weighted distance: minimum over all simple paths.
inline double brute_distance(const BoundaryGraph& g, const std::vector<double>& w, Vertex s, Vertex t) {
  double best = std::numeric_limits<double>::infinity();
  std::vector<char> seen(g.vertex_count(), 0);
  auto dfs = [&](auto&& self, Vertex x, double acc) -> void {
    if (acc >= best) return;
    if (x == t) {
      best = acc;
      return;
    }
    for (Vertex y : g.neighbors(x)) {
      if (seen[y]) continue;
      seen[y] = 1;
      self(self, y, acc + w[y]);
      seen[y] = 0;
    }
  };
  seen[s] = 1;
  dfs(dfs, s, w[s]);
  return best;
}

}  // namespace testing_support
