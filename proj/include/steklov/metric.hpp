#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <span>
#include <vector>

#include "steklov/error.hpp"
#include "steklov/graph.hpp"

namespace steklov {

/// Nonnegative per-vertex weight.
class VertexWeight {
 public:
  VertexWeight() = default;
  explicit VertexWeight(std::vector<double> values) : values_(std::move(values)) {
    for (double w : values_) {
      if (!(w >= 0.0) || !std::isfinite(w))
        throw Error(ErrorCode::InvalidInput, "vertex weights must be finite and nonnegative");
    }
  }
  static VertexWeight constant(std::size_t n, double value) {
    return VertexWeight(std::vector<double>(n, value));
  }

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](Vertex x) const { return values_[x]; }
  const std::vector<double>& values() const noexcept { return values_; }

  double norm2() const {
    double s = 0.0;
    for (double w : values_) s += w * w;
    return std::sqrt(s);
  }
  bool is_zero() const {
    return std::all_of(values_.begin(), values_.end(), [](double w) { return w == 0.0; });
  }
  /// Rescaled copy with unit 2-norm.
  VertexWeight normalized() const {
    double nrm = norm2();
    if (nrm == 0.0) throw Error(ErrorCode::ZeroWeight, "cannot normalize the zero weight");
    std::vector<double> out(values_);
    for (double& w : out) w /= nrm;
    return VertexWeight(std::move(out));
  }

 private:
  std::vector<double> values_;
};

/// All-pairs vertex-weighted path semi-metric. A path's cost is the sum of the
/// weights of every vertex on it, endpoints included, so d(u, u) = w(u).
class SemiMetric {
 public:
  SemiMetric() = default;
  SemiMetric(std::size_t n, std::vector<double> dist) : n_(n), dist_(std::move(dist)) {
    if (dist_.size() != n_ * n_) throw Error(ErrorCode::DimensionMismatch, "distance table size");
  }

  std::size_t size() const noexcept { return n_; }
  double operator()(Vertex u, Vertex v) const { return dist_[u * n_ + v]; }
  std::span<const double> row(Vertex u) const { return {dist_.data() + u * n_, n_}; }

 private:
  std::size_t n_ = 0;
  std::vector<double> dist_;
};

/// Single-source vertex-weighted shortest paths; entering y costs w(y) and the
/// source contributes w(source) once. `parent` receives the predecessor tree.
inline std::vector<double> vertex_weighted_dijkstra(const BoundaryGraph& g, const std::vector<double>& w,
                                                    Vertex source, std::vector<Vertex>* parent = nullptr) {
  const std::size_t n = g.vertex_count();
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n, inf);
  if (parent) parent->assign(n, BoundaryGraph::npos);
  using Item = std::pair<double, Vertex>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[source] = w[source];
  heap.emplace(dist[source], source);
  while (!heap.empty()) {
    auto [d, x] = heap.top();
    heap.pop();
    if (d > dist[x]) continue;
    for (Vertex y : g.neighbors(x)) {
      double nd = d + w[y];
      if (nd < dist[y]) {
        dist[y] = nd;
        if (parent) (*parent)[y] = x;
        heap.emplace(nd, y);
      }
    }
  }
  return dist;
}

inline SemiMetric semi_metric(const BoundaryGraph& g, const VertexWeight& w) {
  const std::size_t n = g.vertex_count();
  if (w.size() != n) throw Error(ErrorCode::DimensionMismatch, "weight has wrong length");
  std::vector<double> table(n * n);
  for (Vertex s = 0; s < n; ++s) {
    auto dist = vertex_weighted_dijkstra(g, w.values(), s);
    std::copy(dist.begin(), dist.end(), table.begin() + static_cast<std::ptrdiff_t>(s * n));
  }
  // Symmetrize exactly; both directions are the same minimum up to summation order.
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) {
      double d = std::min(table[u * n + v], table[v * n + u]);
      table[u * n + v] = table[v * n + u] = d;
    }
  return SemiMetric(n, std::move(table));
}

/// {y : d(x, y) <= r}. Under the diagonal convention x itself is included only when w(x) <= r.
inline std::vector<Vertex> ball(const SemiMetric& m, Vertex x, double r) {
  std::vector<Vertex> out;
  for (Vertex y = 0; y < m.size(); ++y)
    if (m(x, y) <= r) out.push_back(y);
  return out;
}

/// Max of d over all pairs of `s`, diagonal included (a singleton {x} has diameter w(x)).
inline double diameter(const SemiMetric& m, std::span<const Vertex> s) {
  if (s.empty()) throw Error(ErrorCode::InvalidInput, "diameter of an empty set");
  double best = 0.0;
  for (Vertex a : s)
    for (Vertex b : s) best = std::max(best, m(a, b));
  return best;
}

/// Max of d over distinct pairs of `s`; singletons have spread 0.
inline double spread_diameter(const SemiMetric& m, std::span<const Vertex> s) {
  double best = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j) best = std::max(best, m(s[i], s[j]));
  return best;
}

/// Distance from x to a set: 0 when x is a member, otherwise the nearest member's distance.
inline double distance_to_set(const SemiMetric& m, Vertex x, std::span<const Vertex> s) {
  double best = std::numeric_limits<double>::infinity();
  for (Vertex y : s) {
    if (y == x) return 0.0;
    best = std::min(best, m(x, y));
  }
  return best;
}

}  // namespace steklov
