#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "steklov/combinatorics.hpp"
#include "steklov/detail/min_norm_point.hpp"
#include "steklov/detail/qp.hpp"
#include "steklov/error.hpp"
#include "steklov/graph.hpp"
#include "steklov/metric.hpp"

namespace steklov {

/// Largest vertex count for which all simple paths are enumerated without a length cap.
inline constexpr std::size_t kFullEnumerationMaxVertices = 12;
/// Largest number of r-subsets any exhaustive scan will visit.
inline constexpr double kSubsetScanLimit = 1e6;

// ---------------------------------------------------------------- paths

/// Finite collection of simple paths, each stored once with front() < back().
class PathSet {
 public:
  PathSet() = default;

  /// Validates every path against `g` (simple, consecutive vertices adjacent,
  /// at least one edge) and rejects duplicates up to reversal.
  PathSet(const BoundaryGraph& g, std::vector<std::vector<Vertex>> paths) {
    for (auto& p : paths) add(g, std::move(p));
  }

  std::size_t size() const noexcept { return paths_.size(); }
  const std::vector<Vertex>& path(std::size_t i) const { return paths_.at(i); }
  const std::vector<std::vector<Vertex>>& paths() const noexcept { return paths_; }
  std::pair<Vertex, Vertex> endpoints(std::size_t i) const { return {paths_.at(i).front(), paths_.at(i).back()}; }

  /// Ids of the paths joining u and v (either orientation).
  std::span<const std::size_t> between(Vertex u, Vertex v) const {
    if (u > v) std::swap(u, v);
    auto it = by_pair_.find({u, v});
    if (it == by_pair_.end()) return {};
    return it->second;
  }

  /// Append a path; returns its id (the existing id when already present).
  std::size_t add(const BoundaryGraph& g, std::vector<Vertex> p) {
    if (p.size() < 2) throw Error(ErrorCode::InvalidInput, "a path needs at least two vertices");
    for (Vertex x : p)
      if (x >= g.vertex_count()) throw Error(ErrorCode::InvalidInput, "path vertex out of range");
    for (std::size_t i = 0; i + 1 < p.size(); ++i)
      if (!g.adjacent(p[i], p[i + 1])) throw Error(ErrorCode::InvalidInput, "path uses a non-edge");
    std::vector<Vertex> sorted(p);
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw Error(ErrorCode::InvalidInput, "path is not simple");
    if (p.front() > p.back()) std::reverse(p.begin(), p.end());
    if (auto it = index_.find(p); it != index_.end()) return it->second;
    const std::size_t id = paths_.size();
    index_.emplace(p, id);
    by_pair_[{p.front(), p.back()}].push_back(id);
    paths_.push_back(std::move(p));
    return id;
  }

 private:
  std::vector<std::vector<Vertex>> paths_;
  std::map<std::vector<Vertex>, std::size_t> index_;
  std::map<std::pair<Vertex, Vertex>, std::vector<std::size_t>> by_pair_;
};

/// All simple paths (each once up to reversal). `max_interior` caps the number of
/// interior vertices per path; without it the graph must have at most
/// kFullEnumerationMaxVertices vertices. `endpoints`, when given, keeps only
/// paths whose two ends both lie in that set.
inline PathSet enumerate_paths(const BoundaryGraph& g, std::optional<std::size_t> max_interior = std::nullopt,
                               std::optional<std::vector<Vertex>> endpoints = std::nullopt) {
  const std::size_t n = g.vertex_count();
  if (!max_interior && n > kFullEnumerationMaxVertices)
    throw Error(ErrorCode::ExplosionGuard,
                "full simple-path enumeration needs |V| <= " + std::to_string(kFullEnumerationMaxVertices) +
                    " (pass a length cap)");
  std::vector<char> allowed(n, endpoints ? 0 : 1);
  if (endpoints)
    for (Vertex x : *endpoints) allowed.at(x) = 1;

  constexpr std::size_t kMaxPaths = 5'000'000;
  PathSet out;
  std::vector<Vertex> stack;
  std::vector<char> on_path(n, 0);
  std::size_t count = 0;

  auto dfs = [&](auto&& self, Vertex start) -> void {
    const Vertex x = stack.back();
    if (stack.size() >= 2 && x > start && allowed[x]) {
      if (++count > kMaxPaths) throw Error(ErrorCode::ExplosionGuard, "path enumeration exceeded 5e6 paths");
      out.add(g, stack);
    }
    if (max_interior && stack.size() >= *max_interior + 2) return;
    for (Vertex y : g.neighbors(x)) {
      if (on_path[y]) continue;
      on_path[y] = 1;
      stack.push_back(y);
      self(self, start);
      stack.pop_back();
      on_path[y] = 0;
    }
  };
  for (Vertex s = 0; s < n; ++s) {
    if (!allowed[s]) continue;
    stack.assign(1, s);
    on_path[s] = 1;
    dfs(dfs, s);
    on_path[s] = 0;
  }
  return out;
}

// ---------------------------------------------------------------- flows

/// Nonnegative amounts on the paths of a PathSet.
struct Flow {
  PathSet paths;
  std::vector<double> values;

  Flow() = default;
  Flow(PathSet p, std::vector<double> v) : paths(std::move(p)), values(std::move(v)) {
    if (values.size() != paths.size()) throw Error(ErrorCode::DimensionMismatch, "one value per path");
    for (double f : values)
      if (!(f >= 0.0) || !std::isfinite(f)) throw Error(ErrorCode::InvalidInput, "flow values must be >= 0");
  }

  /// F[u, v], total flow between u and v.
  double between(Vertex u, Vertex v) const {
    double total = 0.0;
    for (std::size_t id : paths.between(u, v)) total += values[id];
    return total;
  }
};

/// Per-vertex load C_F(v), the total flow of the paths through v.
inline std::vector<double> vertex_load(const Flow& f, std::size_t vertex_count) {
  std::vector<double> load(vertex_count, 0.0);
  for (std::size_t i = 0; i < f.paths.size(); ++i)
    for (Vertex x : f.paths.path(i)) load.at(x) += f.values[i];
  return load;
}

inline double congestion(const Flow& f, std::size_t vertex_count) {
  double total = 0.0;
  for (double c : vertex_load(f, vertex_count)) total += c * c;
  return total;
}

/// Sum over ordered path pairs (p, p') whose four endpoints are distinct of
/// |p ∩ p'| F(p) F(p').
inline double intersection_number(const Flow& f) {
  const std::size_t m = f.paths.size();
  std::vector<std::vector<Vertex>> sorted(m);
  for (std::size_t i = 0; i < m; ++i) {
    sorted[i] = f.paths.path(i);
    std::sort(sorted[i].begin(), sorted[i].end());
  }
  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (f.values[i] == 0.0) continue;
    const auto [a, b] = f.paths.endpoints(i);
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j || f.values[j] == 0.0) continue;
      const auto [c, d] = f.paths.endpoints(j);
      if (a == c || a == d || b == c || b == d) continue;
      std::size_t common = 0;
      auto x = sorted[i].begin(), y = sorted[j].begin();
      while (x != sorted[i].end() && y != sorted[j].end()) {
        if (*x < *y) ++x;
        else if (*y < *x) ++y;
        else { ++common; ++x; ++y; }
      }
      total += static_cast<double>(common) * f.values[i] * f.values[j];
    }
  }
  return total;
}

/// Probability distribution over r-subsets of the boundary.
struct FlowDistribution {
  std::size_t r = 0;
  std::vector<std::vector<Vertex>> subsets;  ///< each sorted
  std::vector<double> mass;

  /// Throws unless masses are >= 0, sum to 1 (within `tol`), and every subset is an r-subset of B.
  void validate(const BoundaryGraph& g, double tol = 1e-9) const {
    if (subsets.size() != mass.size()) throw Error(ErrorCode::DimensionMismatch, "one mass per subset");
    double total = 0.0;
    for (std::size_t i = 0; i < subsets.size(); ++i) {
      if (!(mass[i] >= 0.0)) throw Error(ErrorCode::InvalidInput, "negative mass");
      total += mass[i];
      const auto& s = subsets[i];
      if (s.size() != r) throw Error(ErrorCode::InvalidInput, "subset has the wrong size");
      if (!std::is_sorted(s.begin(), s.end()) || std::adjacent_find(s.begin(), s.end()) != s.end())
        throw Error(ErrorCode::InvalidInput, "subset must be sorted and repetition-free");
      for (Vertex x : s)
        if (x >= g.vertex_count() || !g.is_boundary(x)) throw Error(ErrorCode::InvalidInput, "subset leaves B");
    }
    if (std::abs(total - 1.0) > tol) throw Error(ErrorCode::InvalidInput, "masses do not sum to 1");
  }

  /// P_{S ~ mu}[u, v in S].
  double pair_probability(Vertex u, Vertex v) const {
    double total = 0.0;
    for (std::size_t i = 0; i < subsets.size(); ++i) {
      const auto& s = subsets[i];
      if (std::binary_search(s.begin(), s.end(), u) && std::binary_search(s.begin(), s.end(), v)) total += mass[i];
    }
    return total;
  }
};

// ---------------------------------------------------------------- spreading

struct SpreadingConstant {
  double value = 0.0;
  std::vector<Vertex> argmin;  ///< lexicographically smallest minimizing subset
};

/// Spreading sum of S: (1/|S|^2) times the sum of d over ordered pairs u != v in S.
inline double spreading_sum(const SemiMetric& m, std::span<const Vertex> s) {
  double total = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j) total += 2.0 * m(s[i], s[j]);
  const double size = static_cast<double>(s.size());
  return total / (size * size);
}

/// Exact eps_r(G, B, w): the minimum spreading sum over r-subsets of B divided by ||w||_2.
inline SpreadingConstant epsilon_r(const BoundaryGraph& g, const VertexWeight& w, std::size_t r) {
  const auto& B = g.boundary();
  if (r < 2 || r > B.size()) throw Error(ErrorCode::InvalidInput, "need 2 <= r <= |B|");
  if (w.is_zero()) throw Error(ErrorCode::ZeroWeight, "spreading constant of the zero weight");
  if (binomial(B.size(), r) > kSubsetScanLimit)
    throw Error(ErrorCode::ExplosionGuard, "binom(|B|, r) exceeds the subset scan limit");
  const SemiMetric m = semi_metric(g, w);

  SpreadingConstant best{std::numeric_limits<double>::infinity(), {}};
  std::vector<Vertex> s(r);
  for_each_combination(B.size(), r, [&](const std::vector<std::size_t>& idx) {
    for (std::size_t i = 0; i < r; ++i) s[i] = B[idx[i]];
    const double v = spreading_sum(m, s);
    if (v < best.value) best = {v, s};
  });
  best.value /= w.norm2();
  return best;
}

/// (w + w∘perm) / 2; by concavity of eps_r in w this never lowers the spreading
/// constant when perm is a graph automorphism preserving B.
inline VertexWeight symmetrize_weight(const VertexWeight& w, std::span<const Vertex> perm) {
  if (perm.size() != w.size()) throw Error(ErrorCode::DimensionMismatch, "permutation length");
  std::vector<double> out(w.size());
  for (Vertex x = 0; x < w.size(); ++x) out[x] = 0.5 * (w[x] + w[perm[x]]);
  return VertexWeight(std::move(out));
}

// ---------------------------------------------------------------- the convex pair

/// The primal/dual data for a fixed (G, B, r) and finite path collection:
/// P (path x vertex incidence), Q (path x boundary-pair connection) and
/// R (r-subset x boundary-pair containment, entries 2/r^2 so that R d equals
/// the ordered-pair spreading sum).
struct FlowProgram {
  std::size_t r = 0;
  std::vector<Vertex> boundary;
  std::vector<std::pair<Vertex, Vertex>> pairs;        ///< boundary pairs u < v
  std::vector<std::vector<std::size_t>> subset_pairs;  ///< pair ids contained in each subset
  std::vector<std::vector<Vertex>> subsets;
  PathSet paths;                      ///< only paths joining two boundary vertices
  std::vector<std::size_t> path_pair; ///< pair id of each path
  Eigen::MatrixXd P, Q, R;

  double pair_weight() const { return 2.0 / static_cast<double>(r * r); }
};

namespace detail {

inline std::vector<std::vector<std::size_t>> boundary_pair_ids(std::size_t nb) {
  std::vector<std::vector<std::size_t>> id(nb, std::vector<std::size_t>(nb, BoundaryGraph::npos));
  std::size_t next = 0;
  for (std::size_t i = 0; i < nb; ++i)
    for (std::size_t j = i + 1; j < nb; ++j) id[i][j] = id[j][i] = next++;
  return id;
}

inline void check_r(const BoundaryGraph& g, std::size_t r) {
  if (r < 2 || r > g.boundary().size()) throw Error(ErrorCode::InvalidInput, "need 2 <= r <= |B|");
  if (binomial(g.boundary().size(), r) > kSubsetScanLimit)
    throw Error(ErrorCode::ExplosionGuard, "binom(|B|, r) exceeds the subset scan limit");
}

/// Subsets (as boundary positions) with the pair ids they contain.
inline void fill_subsets(const BoundaryGraph& g, std::size_t r, std::vector<std::vector<Vertex>>& subsets,
                         std::vector<std::vector<std::size_t>>& subset_pairs) {
  const auto& B = g.boundary();
  const auto pid = boundary_pair_ids(B.size());
  for_each_combination(B.size(), r, [&](const std::vector<std::size_t>& idx) {
    std::vector<Vertex> s(r);
    std::vector<std::size_t> ps;
    for (std::size_t i = 0; i < r; ++i) {
      s[i] = B[idx[i]];
      for (std::size_t j = i + 1; j < r; ++j) ps.push_back(pid[idx[i]][idx[j]]);
    }
    subsets.push_back(std::move(s));
    subset_pairs.push_back(std::move(ps));
  });
}

}  // namespace detail

inline FlowProgram build_flow_program(const BoundaryGraph& g, std::size_t r, const PathSet& paths) {
  detail::check_r(g, r);
  FlowProgram prog;
  prog.r = r;
  prog.boundary = g.boundary();
  const std::size_t nb = g.boundary().size();
  for (std::size_t i = 0; i < nb; ++i)
    for (std::size_t j = i + 1; j < nb; ++j) prog.pairs.emplace_back(prog.boundary[i], prog.boundary[j]);
  detail::fill_subsets(g, r, prog.subsets, prog.subset_pairs);
  const auto pid = detail::boundary_pair_ids(nb);

  for (std::size_t i = 0; i < paths.size(); ++i) {
    const auto [u, v] = paths.endpoints(i);
    if (!g.is_boundary(u) || !g.is_boundary(v)) continue;
    prog.paths.add(g, paths.path(i));
    prog.path_pair.push_back(pid[g.boundary_index(u)][g.boundary_index(v)]);
  }
  std::vector<char> covered(prog.pairs.size(), 0);
  for (std::size_t q : prog.path_pair) covered[q] = 1;
  for (std::size_t q = 0; q < prog.pairs.size(); ++q) {
    if (!covered[q])
      throw Error(ErrorCode::Infeasible, "no path joins boundary vertices " + std::to_string(g.label(prog.pairs[q].first)) +
                                             " and " + std::to_string(g.label(prog.pairs[q].second)));
  }

  const auto np = static_cast<Eigen::Index>(prog.paths.size());
  const auto nv = static_cast<Eigen::Index>(g.vertex_count());
  const auto nq = static_cast<Eigen::Index>(prog.pairs.size());
  const auto ns = static_cast<Eigen::Index>(prog.subsets.size());
  prog.P = Eigen::MatrixXd::Zero(np, nv);
  prog.Q = Eigen::MatrixXd::Zero(np, nq);
  prog.R = Eigen::MatrixXd::Zero(ns, nq);
  for (Eigen::Index p = 0; p < np; ++p) {
    for (Vertex x : prog.paths.path(static_cast<std::size_t>(p))) prog.P(p, static_cast<Eigen::Index>(x)) = 1.0;
    prog.Q(p, static_cast<Eigen::Index>(prog.path_pair[p])) = 1.0;
  }
  for (Eigen::Index s = 0; s < ns; ++s)
    for (std::size_t q : prog.subset_pairs[s]) prog.R(s, static_cast<Eigen::Index>(q)) = prog.pair_weight();
  return prog;
}

struct CongestionSolution {
  Flow flow;              ///< a mu-flow: F[u, v] = P_{S~mu}[u, v in S]
  FlowDistribution mu;
  double value = 0.0;     ///< sqrt(con(F))
  double dual_objective = 0.0;  ///< ||P' lambda||_2 with lambda = (2/r^2) F, the dual program's optimum
  double gap = 0.0;       ///< dual_objective - (best primal bound read off the final iterate)
  int iterations = 0;
};

namespace detail {

struct PairRoute {
  double cost;
  std::size_t path_id;
};

/// Wolfe min-norm point over the congestion vectors of "atoms": one r-subset
/// with one path per contained pair. `route(x)` returns, per boundary pair,
/// the cheapest path under vertex costs x (registering it in `paths`).
template <class Router>
CongestionSolution solve_congestion_dual(const BoundaryGraph& g, std::size_t r,
                                         const std::vector<std::vector<Vertex>>& subsets,
                                         const std::vector<std::vector<std::size_t>>& subset_pairs,
                                         PathSet& paths, Router&& route, double rel_tol) {
  const auto nv = static_cast<Eigen::Index>(g.vertex_count());
  const double wgt = 2.0 / static_cast<double>(r * r);
  struct Atom {
    std::size_t subset;
    std::vector<std::size_t> path_ids;  // aligned with subset_pairs[subset]
  };
  std::vector<Atom> atoms;
  std::map<std::pair<std::size_t, std::vector<std::size_t>>, std::size_t> atom_index;

  auto oracle = [&](const Eigen::VectorXd& x) {
    const std::vector<PairRoute> routes = route(x);
    std::size_t best = 0;
    double best_cost = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < subsets.size(); ++s) {
      double c = 0.0;
      for (std::size_t q : subset_pairs[s]) c += routes[q].cost;
      if (c < best_cost) {
        best_cost = c;
        best = s;
      }
    }
    std::vector<std::size_t> chosen;
    Eigen::VectorXd point = Eigen::VectorXd::Zero(nv);
    for (std::size_t q : subset_pairs[best]) {
      chosen.push_back(routes[q].path_id);
      for (Vertex y : paths.path(routes[q].path_id)) point(static_cast<Eigen::Index>(y)) += wgt;
    }
    auto key = std::make_pair(best, chosen);
    auto [it, inserted] = atom_index.emplace(key, atoms.size());
    if (inserted) atoms.push_back({best, std::move(chosen)});
    return OracleAnswer{std::move(point), it->second};
  };

  const MinNormResult mn = min_norm_point(oracle, Eigen::VectorXd::Ones(nv), rel_tol);

  CongestionSolution out;
  out.mu.r = r;
  std::map<std::size_t, double> subset_mass;
  std::map<std::size_t, double> path_flow;
  for (std::size_t i = 0; i < mn.ids.size(); ++i) {
    const Atom& a = atoms[mn.ids[i]];
    subset_mass[a.subset] += mn.weights[i];
    for (std::size_t pid : a.path_ids) path_flow[pid] += mn.weights[i];
  }
  for (const auto& [s, m] : subset_mass) {
    out.mu.subsets.push_back(subsets[s]);
    out.mu.mass.push_back(m);
  }
  PathSet support;
  std::vector<double> values;
  for (const auto& [pid, f] : path_flow) {
    support.add(g, paths.path(pid));
    values.push_back(f);
  }
  out.flow = Flow(std::move(support), std::move(values));
  out.value = std::sqrt(congestion(out.flow, g.vertex_count()));
  out.dual_objective = mn.x.norm();
  out.gap = mn.gap / std::max(mn.x.norm(), 1e-300);
  out.iterations = mn.iterations;
  return out;
}

}  // namespace detail

/// Minimum-congestion mu-flow over `paths` with supp(mu) inside binom(B, r).
/// The returned flow satisfies the dual program's constraints lambda'Q = mu'R
/// with lambda = (2/r^2) F.
inline CongestionSolution min_congestion_flow(const BoundaryGraph& g, std::size_t r, const PathSet& paths,
                                              double rel_tol = 1e-12) {
  FlowProgram prog = build_flow_program(g, r, paths);
  std::vector<std::vector<std::size_t>> by_pair(prog.pairs.size());
  for (std::size_t p = 0; p < prog.paths.size(); ++p) by_pair[prog.path_pair[p]].push_back(p);

  auto route = [&](const Eigen::VectorXd& x) {
    const Eigen::VectorXd cost = prog.P * x;
    std::vector<detail::PairRoute> out(prog.pairs.size());
    for (std::size_t q = 0; q < by_pair.size(); ++q) {
      detail::PairRoute best{std::numeric_limits<double>::infinity(), 0};
      for (std::size_t p : by_pair[q])
        if (cost(static_cast<Eigen::Index>(p)) < best.cost) best = {cost(static_cast<Eigen::Index>(p)), p};
      out[q] = best;
    }
    return out;
  };
  return detail::solve_congestion_dual(g, r, prog.subsets, prog.subset_pairs, prog.paths, route, rel_tol);
}

/// Same optimum over every simple path of the graph, generating cheapest paths
/// on demand by vertex-weighted Dijkstra instead of enumerating them.
inline CongestionSolution min_congestion_flow(const BoundaryGraph& g, std::size_t r, double rel_tol = 1e-12) {
  detail::check_r(g, r);
  std::vector<std::vector<Vertex>> subsets;
  std::vector<std::vector<std::size_t>> subset_pairs;
  detail::fill_subsets(g, r, subsets, subset_pairs);
  const auto& B = g.boundary();
  PathSet registry;

  auto route = [&](const Eigen::VectorXd& x) {
    std::vector<double> w(x.data(), x.data() + x.size());
    std::vector<detail::PairRoute> out;
    std::vector<Vertex> parent;
    for (std::size_t i = 0; i < B.size(); ++i) {
      const auto dist = vertex_weighted_dijkstra(g, w, B[i], &parent);
      for (std::size_t j = i + 1; j < B.size(); ++j) {
        std::vector<Vertex> p{B[j]};
        while (p.back() != B[i]) p.push_back(parent[p.back()]);
        out.push_back({dist[B[j]], registry.add(g, std::move(p))});
      }
    }
    return out;
  };
  return detail::solve_congestion_dual(g, r, subsets, subset_pairs, registry, route, rel_tol);
}

struct SpreadingWeight {
  VertexWeight weight;          ///< unit 2-norm
  double epsilon = 0.0;         ///< eps_r(G, B, weight), recomputed from the true semi-metric
  std::vector<Vertex> argmin;   ///< a tight r-subset
  double program_value = 0.0;   ///< optimum of the solved program
  std::vector<double> pair_distance;  ///< d variables per boundary pair (primal route only)
  int iterations = 0;
};

/// Primal route: solve  max eps  s.t.  eps 1 <= R d, Q d <= P s, ||s|| <= 1, d, s >= 0
/// through the equivalent QP  min ||s||^2/2  s.t.  R d >= 1, Q d <= P s, d, s >= 0
/// (eps = 1/||s*||) with an interior point method over the explicit matrices.
inline SpreadingWeight max_spreading_weight(const BoundaryGraph& g, std::size_t r, const PathSet& paths,
                                            double tol = 1e-10) {
  const FlowProgram prog = build_flow_program(g, r, paths);
  const Eigen::Index nq = prog.Q.cols(), nv = prog.P.cols();
  const Eigen::Index np = prog.P.rows(), ns = prog.R.rows();
  const Eigen::Index nx = nq + nv;

  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(nx, nx);
  H.bottomRightCorner(nv, nv).setIdentity();
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(ns + np + nx, nx);
  Eigen::VectorXd h = Eigen::VectorXd::Zero(ns + np + nx);
  G.block(0, 0, ns, nq) = -prog.R;
  h.head(ns).setConstant(-1.0);
  G.block(ns, 0, np, nq) = prog.Q;
  G.block(ns, nq, np, nv) = -prog.P;
  G.block(ns + np, 0, nx, nx) = -Eigen::MatrixXd::Identity(nx, nx);

  const detail::QpResult qp = detail::solve_qp(H, Eigen::VectorXd::Zero(nx), G, h, tol);
  const Eigen::VectorXd s = qp.x.tail(nv).cwiseMax(0.0);
  const double norm = s.norm();
  if (!(norm > 0.0)) throw Error(ErrorCode::SolverStalled, "primal program returned a zero weight");

  SpreadingWeight out;
  out.weight = VertexWeight(std::vector<double>(s.data(), s.data() + s.size())).normalized();
  const Eigen::VectorXd d = qp.x.head(nq) / norm;
  out.pair_distance.assign(d.data(), d.data() + d.size());
  out.program_value = (prog.R * d).minCoeff();
  const SpreadingConstant eps = epsilon_r(g, out.weight, r);
  out.epsilon = eps.value;
  out.argmin = eps.argmin;
  out.iterations = qp.iterations;
  return out;
}

/// Optimal spreading weight over all simple paths: the normalized min-norm
/// congestion vector of the implicit dual, which is primal-optimal by duality.
inline SpreadingWeight max_spreading_weight(const BoundaryGraph& g, std::size_t r, double rel_tol = 1e-12) {
  const CongestionSolution dual = min_congestion_flow(g, r, rel_tol);
  const double scale = 2.0 / static_cast<double>(r * r);
  std::vector<double> load = vertex_load(dual.flow, g.vertex_count());
  for (double& c : load) c *= scale;
  SpreadingWeight out;
  out.weight = VertexWeight(std::move(load)).normalized();
  const SpreadingConstant eps = epsilon_r(g, out.weight, r);
  out.epsilon = eps.value;
  out.argmin = eps.argmin;
  out.program_value = dual.dual_objective;
  out.iterations = dual.iterations;
  return out;
}

struct DualityGap {
  double primal = 0.0;  ///< max eps_r from the interior point route
  double dual = 0.0;    ///< (2/r^2) min sqrt(con F) from the min-norm route
  double gap = 0.0;     ///< |primal - dual|
  SpreadingWeight primal_solution;
  CongestionSolution dual_solution;
};

inline DualityGap duality_gap(const BoundaryGraph& g, std::size_t r, const PathSet& paths) {
  DualityGap out;
  out.primal_solution = max_spreading_weight(g, r, paths);
  out.dual_solution = min_congestion_flow(g, r, paths);
  out.primal = out.primal_solution.program_value;
  out.dual = out.dual_solution.dual_objective;
  out.gap = std::abs(out.primal - out.dual);
  return out;
}

/// Duality gap with the full simple-path collection (|V| <= kFullEnumerationMaxVertices).
inline DualityGap duality_gap(const BoundaryGraph& g, std::size_t r) {
  return duality_gap(g, r, enumerate_paths(g, std::nullopt, g.boundary()));
}

}  // namespace steklov
