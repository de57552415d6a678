#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "steklov/error.hpp"
#include "steklov/graph.hpp"
#include "steklov/random.hpp"

namespace steklov {

namespace detail {

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

inline std::uint64_t parse_count(std::string_view tok, std::string_view spec) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    throw Error(ErrorCode::BadSpec, "bad number '" + std::string(tok) + "' in '" + std::string(spec) + "'");
  return v;
}

using EdgeList = std::vector<std::pair<VertexId, VertexId>>;

}  // namespace detail

inline BoundaryGraph path_graph(std::size_t n) {
  if (n < 3) throw Error(ErrorCode::BadSpec, "path needs n >= 3");
  detail::EdgeList e;
  for (VertexId i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return build_graph(e, std::vector<VertexId>{0, n - 1});
}

/// Cycle on n vertices with boundary {i : i % step == 0}.
inline BoundaryGraph cycle_graph(std::size_t n, std::size_t step) {
  if (n < 3 || step < 2) throw Error(ErrorCode::BadSpec, "cycle needs n >= 3 and step >= 2");
  detail::EdgeList e;
  std::vector<VertexId> b;
  for (VertexId i = 0; i < n; ++i) {
    e.emplace_back(i, (i + 1) % n);
    if (i % step == 0) b.push_back(i);
  }
  return build_graph(e, b);
}

/// Star on n vertices: center 0, leaves 1..n-1 form the boundary.
inline BoundaryGraph star_graph(std::size_t n) {
  if (n < 3) throw Error(ErrorCode::BadSpec, "star needs n >= 3");
  detail::EdgeList e;
  std::vector<VertexId> b;
  for (VertexId i = 1; i < n; ++i) {
    e.emplace_back(0, i);
    b.push_back(i);
  }
  return build_graph(e, b);
}

enum class GridBoundary { Outer, Ends };

/// width x height grid, ids row-major. Outer: the outer cycle. Ends: first and last column.
inline BoundaryGraph grid_graph(std::size_t width, std::size_t height, GridBoundary kind) {
  if (width < 2 || height < 2) throw Error(ErrorCode::BadSpec, "grid needs both sides >= 2");
  detail::EdgeList e;
  std::vector<VertexId> b;
  auto id = [&](std::size_t x, std::size_t y) { return static_cast<VertexId>(y * width + x); };
  for (std::size_t y = 0; y < height; ++y) {
    for (std::size_t x = 0; x < width; ++x) {
      if (x + 1 < width) e.emplace_back(id(x, y), id(x + 1, y));
      if (y + 1 < height) e.emplace_back(id(x, y), id(x, y + 1));
      const bool on_outer = x == 0 || y == 0 || x + 1 == width || y + 1 == height;
      const bool on_end = x == 0 || x + 1 == width;
      if (kind == GridBoundary::Outer ? on_outer : on_end) b.push_back(id(x, y));
    }
  }
  return build_graph(e, b);
}

/// n x n torus grid with boundary = row 0; genus hint 1.
inline BoundaryGraph torus_grid_graph(std::size_t n) {
  if (n < 3) throw Error(ErrorCode::BadSpec, "torus grid needs n >= 3");
  detail::EdgeList e;
  std::vector<VertexId> b;
  auto id = [&](std::size_t x, std::size_t y) { return static_cast<VertexId>(y * n + x); };
  for (std::size_t y = 0; y < n; ++y)
    for (std::size_t x = 0; x < n; ++x) {
      e.emplace_back(id(x, y), id((x + 1) % n, y));
      e.emplace_back(id(x, y), id(x, (y + 1) % n));
    }
  for (std::size_t x = 0; x < n; ++x) b.push_back(id(x, 0));
  return build_graph(e, b, {}, 1);
}

/// Uniform random labelled tree on n vertices (Prüfer decoding); boundary = leaves.
inline BoundaryGraph random_tree(std::size_t n, std::uint64_t seed) {
  if (n < 3) throw Error(ErrorCode::BadSpec, "tree needs n >= 3");
  Rng rng(mix_seed(seed));
  std::vector<std::size_t> code(n - 2);
  for (auto& c : code) c = rng.below(n);
  std::vector<std::size_t> degree(n, 1);
  for (auto c : code) ++degree[c];
  std::set<std::size_t> leaves;
  for (std::size_t v = 0; v < n; ++v)
    if (degree[v] == 1) leaves.insert(v);
  detail::EdgeList e;
  for (auto c : code) {
    const std::size_t leaf = *leaves.begin();
    leaves.erase(leaves.begin());
    e.emplace_back(leaf, c);
    if (--degree[c] == 1) leaves.insert(c);
  }
  const std::size_t a = *leaves.begin();
  const std::size_t z = *std::next(leaves.begin());
  e.emplace_back(a, z);

  std::vector<std::size_t> deg(n, 0);
  for (const auto& [u, v] : e) {
    ++deg[u];
    ++deg[v];
  }
  std::vector<VertexId> b;
  for (std::size_t v = 0; v < n; ++v)
    if (deg[v] == 1) b.push_back(v);
  return build_graph(e, b);
}

/// Build an instance from a generator spec:
///   path:n | cycle:n:step | star:n | grid:n:outer | grid:WxH:outer|ends |
///   torus-grid:n | tree:random:n:seed
inline BoundaryGraph generate(std::string_view spec) {
  const auto parts = detail::split(spec, ':');
  const std::string_view kind = parts[0];
  auto want = [&](std::size_t count) {
    if (parts.size() != count) throw Error(ErrorCode::BadSpec, "malformed generator spec '" + std::string(spec) + "'");
  };
  auto num = [&](std::size_t i) { return detail::parse_count(parts[i], spec); };

  if (kind == "path") {
    want(2);
    return path_graph(num(1));
  }
  if (kind == "cycle") {
    want(3);
    return cycle_graph(num(1), num(2));
  }
  if (kind == "star") {
    want(2);
    return star_graph(num(1));
  }
  if (kind == "grid") {
    want(3);
    GridBoundary gb;
    if (parts[2] == "outer") gb = GridBoundary::Outer;
    else if (parts[2] == "ends") gb = GridBoundary::Ends;
    else throw Error(ErrorCode::BadSpec, "grid boundary must be 'outer' or 'ends'");
    const auto dims = detail::split(parts[1], 'x');
    if (dims.size() == 1) {
      const auto n = detail::parse_count(dims[0], spec);
      if (n < 3) throw Error(ErrorCode::BadSpec, "square grid needs n >= 3");
      return grid_graph(n, n, gb);
    }
    if (dims.size() != 2) throw Error(ErrorCode::BadSpec, "grid size must be n or WxH");
    return grid_graph(detail::parse_count(dims[0], spec), detail::parse_count(dims[1], spec), gb);
  }
  if (kind == "torus-grid") {
    want(2);
    return torus_grid_graph(num(1));
  }
  if (kind == "tree") {
    want(4);
    if (parts[1] != "random") throw Error(ErrorCode::BadSpec, "only tree:random:n:seed is supported");
    return random_tree(num(2), num(3));
  }
  throw Error(ErrorCode::BadSpec, "unknown generator '" + std::string(kind) + "'");
}

}  // namespace steklov
