#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "steklov/decomposition.hpp"
#include "steklov/error.hpp"
#include "steklov/flows.hpp"
#include "steklov/graph.hpp"
#include "steklov/metric.hpp"
#include "steklov/spectrum.hpp"

namespace steklov {

/// Slack used when auditing the inequalities of the test-function construction.
inline constexpr double kAuditSlack = 1e-10;

namespace detail {
inline bool leq(double a, double b, double slack = kAuditSlack) { return a <= b + slack * std::max(1.0, std::abs(b)); }
}  // namespace detail

/// Padded boundary cores {x in C ∩ B : B(x, eps/(2 alpha)) ⊆ C}, one per block,
/// with empty cores dropped. The partition must be eps/2-bounded.
inline std::vector<std::vector<Vertex>> padded_core_sets(const BoundaryGraph& g, const SemiMetric& m,
                                                         const Partition& part, double epsilon, double alpha,
                                                         BlockDiameter mode = BlockDiameter::OffDiagonal) {
  if (!(epsilon > 0.0) || !(alpha >= 1.0)) throw Error(ErrorCode::InvalidInput, "need eps > 0 and alpha >= 1");
  if (!is_kappa_bounded(m, part, epsilon / 2.0, mode))
    throw Error(ErrorCode::PartitionNotBounded, "partition is not eps/2-bounded");
  const double radius = epsilon / (2.0 * alpha);
  std::vector<std::vector<Vertex>> cores(part.blocks.size());
  for (Vertex x : g.boundary())
    if (padding_slack(m, part, x) > radius) cores[part.assignment[x]].push_back(x);
  std::erase_if(cores, [](const auto& c) { return c.empty(); });
  return cores;
}

/// Size window [delta|B|/4k, delta|B|/2k] of the grouped sets.
struct SizeWindow {
  double lo, hi;
};
inline SizeWindow group_window(std::size_t boundary_size, std::size_t k, double delta) {
  const double lo = delta * static_cast<double>(boundary_size) / (4.0 * static_cast<double>(k));
  return {lo, 2.0 * lo};
}

/// Merge cores into 2k disjoint sets with sizes in the window, first-fit by
/// decreasing core size. Throws Retry when the partition does not meet the
/// cardinality premises (total >= delta|B|, each core <= delta|B|/4k).
inline std::vector<std::vector<Vertex>> group_core_sets(const std::vector<std::vector<Vertex>>& cores,
                                                        std::size_t boundary_size, std::size_t k, double delta) {
  const SizeWindow win = group_window(boundary_size, k, delta);
  std::size_t total = 0;
  for (const auto& c : cores) {
    if (static_cast<double>(c.size()) > win.lo) throw Error(ErrorCode::Retry, "a padded core exceeds delta|B|/4k");
    total += c.size();
  }
  if (static_cast<double>(total) < delta * static_cast<double>(boundary_size))
    throw Error(ErrorCode::Retry, "padded cores cover fewer than delta|B| boundary vertices");

  std::vector<std::size_t> order(cores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return cores[a].size() > cores[b].size(); });

  std::vector<std::vector<Vertex>> bins;
  for (std::size_t i : order) {
    auto open = std::find_if(bins.begin(), bins.end(), [&](const auto& b) { return static_cast<double>(b.size()) < win.lo; });
    if (open == bins.end()) {
      if (bins.size() == 2 * k) continue;
      bins.emplace_back();
      open = std::prev(bins.end());
    }
    open->insert(open->end(), cores[i].begin(), cores[i].end());
  }
  if (bins.size() < 2 * k) throw Error(ErrorCode::Retry, "not enough cores for 2k sets");
  for (auto& b : bins) {
    std::sort(b.begin(), b.end());
    const auto size = static_cast<double>(b.size());
    if (size < win.lo || size > win.hi) throw Error(ErrorCode::Retry, "grouped set outside the size window");
  }
  return bins;
}

struct TestFunctionFamily {
  double radius = 0.0;                            ///< eps / (2 alpha)
  std::vector<std::vector<Vertex>> source_sets;   ///< the k chosen S_i
  std::vector<std::vector<Vertex>> neighborhoods; ///< their radius-neighbourhoods
  std::vector<double> w_values;                   ///< W of each chosen neighbourhood
  std::vector<double> all_w_values;               ///< W of all 2k neighbourhoods, input order
  std::vector<std::size_t> chosen;                ///< indices of the chosen sets among the 2k
  Eigen::MatrixXd functions;                      ///< |V| x k, column i is f_i
};

/// W(S~) = sum over u in S~ and neighbours v of (w(u) + w(v))^2.
inline double neighborhood_budget(const BoundaryGraph& g, const VertexWeight& w, std::span<const Vertex> set) {
  double total = 0.0;
  for (Vertex u : set)
    for (Vertex v : g.neighbors(u)) total += (w[u] + w[v]) * (w[u] + w[v]);
  return total;
}

/// Tent functions f_i(x) = max(0, rho - d(x, S_i)) on the k of the 2k sets whose
/// neighbourhoods have the smallest W.
inline TestFunctionFamily build_test_functions(const BoundaryGraph& g, const SemiMetric& m,
                                               const std::vector<std::vector<Vertex>>& sets, double epsilon,
                                               double alpha, const VertexWeight& w, std::size_t k) {
  if (sets.size() < k) throw Error(ErrorCode::InvalidInput, "fewer sets than functions requested");
  const std::size_t n = g.vertex_count();
  TestFunctionFamily fam;
  fam.radius = epsilon / (2.0 * alpha);

  std::vector<std::vector<Vertex>> hoods;
  std::vector<int> owner(n, -1);
  for (std::size_t i = 0; i < sets.size(); ++i) {
    std::vector<Vertex> hood;
    for (Vertex x = 0; x < n; ++x) {
      if (distance_to_set(m, x, sets[i]) > fam.radius) continue;
      if (owner[x] != -1) throw Error(ErrorCode::NeighborhoodsOverlap, "neighbourhoods of grouped sets intersect");
      owner[x] = static_cast<int>(i);
      hood.push_back(x);
    }
    fam.all_w_values.push_back(neighborhood_budget(g, w, hood));
    hoods.push_back(std::move(hood));
  }

  std::vector<std::size_t> order(sets.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return fam.all_w_values[a] < fam.all_w_values[b]; });
  fam.chosen.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
  fam.functions = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k));
  for (std::size_t c = 0; c < k; ++c) {
    const std::size_t i = fam.chosen[c];
    fam.source_sets.push_back(sets[i]);
    fam.neighborhoods.push_back(hoods[i]);
    fam.w_values.push_back(fam.all_w_values[i]);
    for (Vertex x = 0; x < n; ++x)
      fam.functions(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(c)) =
          std::max(0.0, fam.radius - distance_to_set(m, x, sets[i]));
  }
  return fam;
}

/// Each inequality of the construction, re-evaluated from the family and weight.
struct FamilyAudit {
  bool supports_disjoint = false;
  bool lipschitz = false;          ///< |f(u) - f(v)| <= w(u) + w(v) on every edge
  bool energy_within_budget = false;  ///< edge energy of f_i <= W(S~_i)
  bool budget_within_4d_over_k = false;
  bool total_budget = false;       ///< sum of all 2k W values <= 4D sum w^2
  bool boundary_mass = false;      ///< sum_B f_i^2 >= rho^2 delta|B|/4k
  bool peak_on_sources = false;    ///< f_i = rho on S_i
  bool all() const {
    return supports_disjoint && lipschitz && energy_within_budget && budget_within_4d_over_k && total_budget &&
           boundary_mass && peak_on_sources;
  }
};

inline FamilyAudit audit_family(const BoundaryGraph& g, const VertexWeight& w, const TestFunctionFamily& fam,
                                std::size_t k, double delta) {
  FamilyAudit a;
  const auto& F = fam.functions;
  const double D = static_cast<double>(g.max_degree());
  double wsq = 0.0;
  for (double x : w.values()) wsq += x * x;

  a.supports_disjoint = true;
  for (Vertex x = 0; x < g.vertex_count(); ++x) {
    int nonzero = 0;
    for (Eigen::Index i = 0; i < F.cols(); ++i) nonzero += F(static_cast<Eigen::Index>(x), i) != 0.0;
    if (nonzero > 1) a.supports_disjoint = false;
  }

  a.lipschitz = a.energy_within_budget = a.budget_within_4d_over_k = a.boundary_mass = a.peak_on_sources = true;
  const double mass_floor =
      fam.radius * fam.radius * delta * static_cast<double>(g.boundary().size()) / (4.0 * static_cast<double>(k));
  for (Eigen::Index i = 0; i < F.cols(); ++i) {
    double energy = 0.0;
    for (const auto& e : g.edges()) {
      const double diff = std::abs(F(static_cast<Eigen::Index>(e.u), i) - F(static_cast<Eigen::Index>(e.v), i));
      if (!detail::leq(diff, w[e.u] + w[e.v])) a.lipschitz = false;
      energy += diff * diff;
    }
    const auto ci = static_cast<std::size_t>(i);
    if (!detail::leq(energy, fam.w_values[ci])) a.energy_within_budget = false;
    if (!detail::leq(fam.w_values[ci], 4.0 * D / static_cast<double>(k))) a.budget_within_4d_over_k = false;
    double mass = 0.0;
    for (Vertex b : g.boundary()) mass += F(static_cast<Eigen::Index>(b), i) * F(static_cast<Eigen::Index>(b), i);
    if (!detail::leq(mass_floor, mass)) a.boundary_mass = false;
    for (Vertex s : fam.source_sets[ci])
      if (std::abs(F(static_cast<Eigen::Index>(s), i) - fam.radius) > kAuditSlack) a.peak_on_sources = false;
  }
  const double total = std::accumulate(fam.all_w_values.begin(), fam.all_w_values.end(), 0.0);
  a.total_budget = detail::leq(total, 4.0 * D * wsq);
  return a;
}

struct CertifyOptions {
  std::size_t retries = 64;
  std::uint64_t seed = 0;
  std::size_t calibration_samples = 2000;
  double solver_tol = 1e-12;
};

struct BoundCertificate {
  // parameters
  std::size_t k = 0;
  double delta = 0.0;
  std::size_t boundary_size = 0;
  std::size_t max_degree = 0;
  std::size_t r_nominal = 0;  ///< floor(delta|B|/4k)
  std::size_t r_used = 0;     ///< subset size of the spreading solve, max(2, r_nominal)
  std::uint64_t seed = 0;

  // ingredients
  VertexWeight weight;
  double epsilon = 0.0;
  double kappa = 0.0;
  double alpha = std::numeric_limits<double>::infinity();
  double alpha_halfwidth = 0.0;
  std::optional<Partition> partition;
  std::size_t attempts = 0;
  std::vector<std::vector<Vertex>> cores;
  std::vector<std::vector<Vertex>> grouped_sets;
  std::optional<TestFunctionFamily> family;
  std::optional<FamilyAudit> audit;

  // verdict
  double sigma_k = 0.0;
  std::vector<double> rayleigh_values;
  double max_rayleigh = std::numeric_limits<double>::infinity();
  double rhs = std::numeric_limits<double>::infinity();  ///< (64k/delta)(D/|B|)(alpha/eps)^2
  bool rayleigh_bound_holds = false;   ///< sigma_k <= k max R(f_i)
  bool per_function_holds = false;  ///< max R(f_i) <= rhs / k
  bool certified = false;     ///< the strong bound was certified from a completed construction

  // degradation
  std::string failed_stage;   ///< empty when certified
  std::string failure;
  double fallback_bound = 0.0;  ///< kD
  bool fallback_holds = false;

  bool verdict() const { return certified ? (rayleigh_bound_holds && per_function_holds) : fallback_holds; }
};

/// Run the test-function construction end to end and check both inequalities
/// from scratch. Any failing stage degrades the certificate to sigma_k <= kD.
inline BoundCertificate certify_bound(const BoundaryGraph& g, std::size_t k, double delta,
                                      const CertifyOptions& opt = {}) {
  const std::size_t nb = g.boundary().size();
  if (k < 1 || k > nb) throw Error(ErrorCode::InvalidInput, "k must lie in [1, |B|]");
  if (!(delta > 0.0 && delta < 1.0)) throw Error(ErrorCode::InvalidInput, "delta must lie in (0, 1)");

  BoundCertificate cert;
  cert.k = k;
  cert.delta = delta;
  cert.boundary_size = nb;
  cert.max_degree = g.max_degree();
  cert.seed = opt.seed;
  cert.sigma_k = steklov_spectrum(g).eigenvalues(static_cast<Eigen::Index>(k - 1));
  cert.fallback_bound = static_cast<double>(k * g.max_degree());
  cert.fallback_holds = detail::leq(cert.sigma_k, cert.fallback_bound);
  cert.r_nominal = static_cast<std::size_t>(std::floor(delta * static_cast<double>(nb) / (4.0 * static_cast<double>(k))));
  cert.r_used = std::max<std::size_t>(2, cert.r_nominal);

  auto degrade = [&](std::string stage, const std::string& why) {
    cert.failed_stage = std::move(stage);
    cert.failure = why;
    cert.certified = false;
    return cert;
  };

  if (k < 2 || static_cast<double>(k) > delta * static_cast<double>(nb) / 4.0)
    return degrade("precondition", "requires 2 <= k <= delta|B|/4");

  try {
    const SpreadingWeight sw = max_spreading_weight(g, cert.r_used, opt.solver_tol);
    cert.weight = sw.weight;
    cert.epsilon = sw.epsilon;
  } catch (const Error& e) {
    return degrade("spreading", e.what());
  }
  if (!(cert.epsilon > 0.0)) return degrade("spreading", "spreading constant is zero");

  const SemiMetric m = semi_metric(g, cert.weight);
  cert.kappa = cert.epsilon / 2.0;
  const AlphaCalibration cal =
      calibrate_alpha(m, g.boundary(), cert.kappa, delta, opt.calibration_samples, mix_seed(opt.seed, 1));
  cert.alpha = cal.alpha;
  cert.alpha_halfwidth = cal.confidence_halfwidth;
  if (!std::isfinite(cert.alpha)) return degrade("calibration", "no grid alpha reaches the padding target");

  for (std::size_t attempt = 0; attempt < opt.retries; ++attempt) {
    cert.attempts = attempt + 1;
    Partition part = sample_partition(m, cert.kappa, mix_seed(mix_seed(opt.seed, 2), attempt));
    try {
      auto cores = padded_core_sets(g, m, part, cert.epsilon, cert.alpha);
      auto sets = group_core_sets(cores, nb, k, delta);
      auto fam = build_test_functions(g, m, sets, cert.epsilon, cert.alpha, cert.weight, k);
      cert.partition = std::move(part);
      cert.cores = std::move(cores);
      cert.grouped_sets = std::move(sets);
      cert.family = std::move(fam);
      break;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::Retry) return degrade("construction", e.what());
    }
  }
  if (!cert.family) return degrade("partition", "RetriesExhausted: no sampled partition met the core premises");

  const auto& fam = *cert.family;
  cert.audit = audit_family(g, cert.weight, fam, k, delta);
  cert.rayleigh_values.clear();
  for (Eigen::Index i = 0; i < fam.functions.cols(); ++i)
    cert.rayleigh_values.push_back(rayleigh_quotient(g, fam.functions.col(i)));
  cert.max_rayleigh = *std::max_element(cert.rayleigh_values.begin(), cert.rayleigh_values.end());
  const double D = static_cast<double>(g.max_degree());
  const double ratio = cert.alpha / cert.epsilon;
  cert.rhs = 64.0 * static_cast<double>(k) / delta * D / static_cast<double>(nb) * ratio * ratio;
  cert.rayleigh_bound_holds = detail::leq(cert.sigma_k, static_cast<double>(k) * cert.max_rayleigh);
  cert.per_function_holds = detail::leq(cert.max_rayleigh, cert.rhs / static_cast<double>(k));
  if (!cert.audit->all()) return degrade("audit", "a construction inequality failed its audit");
  cert.certified = true;
  return cert;
}

struct ScalingRow {
  std::string instance;
  std::size_t size = 0;
  std::size_t k = 0;
  double sigma_k = 0.0;
  std::size_t boundary_size = 0;
  std::size_t max_degree = 0;
  double ratio = 0.0;         ///< sigma_k |B| / (D k^2)
  double ratio_linear = 0.0;  ///< sigma_k |B| / (D k)
  bool in_certified_range = false;  ///< 2 <= k <= delta|B|/4
};

}  // namespace steklov
