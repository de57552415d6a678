#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "steklov/error.hpp"
#include "steklov/metric.hpp"
#include "steklov/random.hpp"

namespace steklov {

/// How the diameter of a partition block is measured.
///  - OffDiagonal: max over distinct pairs, so singletons have diameter 0.
///  - Diagonal: max over all pairs including d(x, x) = w(x).
/// The two differ only on singleton blocks, since d(x, y) >= w(x) + w(y).
enum class BlockDiameter { OffDiagonal, Diagonal };

struct Partition {
  std::vector<std::vector<Vertex>> blocks;  ///< sorted blocks, ordered by smallest member
  std::vector<std::size_t> assignment;      ///< vertex -> block id
  double kappa = 0.0;
  std::uint64_t seed = 0;

  const std::vector<Vertex>& block_of(Vertex x) const { return blocks[assignment[x]]; }
};

inline double block_diameter(const SemiMetric& m, std::span<const Vertex> block, BlockDiameter mode) {
  return mode == BlockDiameter::Diagonal ? diameter(m, block) : spread_diameter(m, block);
}

inline bool is_kappa_bounded(const SemiMetric& m, const Partition& p, double kappa,
                             BlockDiameter mode = BlockDiameter::OffDiagonal) {
  return std::all_of(p.blocks.begin(), p.blocks.end(),
                     [&](const auto& b) { return block_diameter(m, b, mode) <= kappa; });
}

/// CKR-style sampler: one radius uniform on [kappa/4, kappa/2], a uniformly
/// random center order, and each vertex joins the first center whose ball
/// captures it. A center always captures itself, so every block has diameter
/// at most twice the radius.
inline Partition sample_partition(const SemiMetric& m, double kappa, std::uint64_t seed,
                                  BlockDiameter mode = BlockDiameter::OffDiagonal) {
  if (!(kappa > 0.0)) throw Error(ErrorCode::InvalidInput, "kappa must be positive");
  const std::size_t n = m.size();
  if (mode == BlockDiameter::Diagonal) {
    for (Vertex x = 0; x < n; ++x)
      if (m(x, x) > kappa)
        throw Error(ErrorCode::BlockDiameterInfeasible, "a vertex weight exceeds kappa, so no kappa-bounded block holds it");
  }
  Rng rng(seed);
  const double radius = rng.uniform(kappa / 4.0, kappa / 2.0);
  std::vector<Vertex> order(n);
  std::iota(order.begin(), order.end(), Vertex{0});
  rng.shuffle(order);

  constexpr std::size_t unassigned = static_cast<std::size_t>(-1);
  std::vector<std::size_t> center_of(n, unassigned);
  std::size_t remaining = n;
  for (Vertex c : order) {
    if (remaining == 0) break;
    const auto row = m.row(c);
    for (Vertex y = 0; y < n; ++y) {
      if (center_of[y] == unassigned && (y == c || row[y] <= radius)) {
        center_of[y] = c;
        --remaining;
      }
    }
  }

  Partition p;
  p.kappa = kappa;
  p.seed = seed;
  p.assignment.assign(n, unassigned);
  std::vector<std::size_t> block_of_center(n, unassigned);
  for (Vertex y = 0; y < n; ++y) {
    std::size_t& b = block_of_center[center_of[y]];
    if (b == unassigned) {
      b = p.blocks.size();
      p.blocks.emplace_back();
    }
    p.blocks[b].push_back(y);
    p.assignment[y] = b;
  }
  return p;
}

/// The fixed modulus grid: powers of sqrt(2) from 1 to 64.
inline std::vector<double> alpha_grid() {
  std::vector<double> grid;
  for (int i = 0; i <= 12; ++i) grid.push_back(std::pow(std::sqrt(2.0), i));
  grid.back() = 64.0;
  return grid;
}

/// For the boundary vertex x, the distance to the nearest vertex outside its block
/// (+inf if the block is everything). B(x, rho) lies inside the block iff rho is below it.
inline double padding_slack(const SemiMetric& m, const Partition& p, Vertex x) {
  double best = std::numeric_limits<double>::infinity();
  const std::size_t own = p.assignment[x];
  const auto row = m.row(x);
  for (Vertex y = 0; y < m.size(); ++y)
    if (p.assignment[y] != own) best = std::min(best, row[y]);
  return best;
}

struct PaddingReport {
  double kappa = 0.0;
  double alpha = 0.0;
  double delta_target = 0.0;
  std::vector<Vertex> boundary;
  std::vector<double> pad_probability;  ///< aligned with `boundary`
  double min_pad_probability = 0.0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  double confidence_halfwidth = 0.0;    ///< 95% Hoeffding half-width
  /// Smallest grid alpha' <= alpha whose empirical padding meets delta_target, +inf if none.
  double best_grid_alpha = std::numeric_limits<double>::infinity();
};

inline double hoeffding_halfwidth(std::size_t samples, double confidence = 0.95) {
  return std::sqrt(std::log(2.0 / (1.0 - confidence)) / (2.0 * static_cast<double>(samples)));
}

namespace detail {

/// counts[g][i]: samples in which boundary[i] is padded at radius kappa / radii_alpha[g].
inline std::vector<std::vector<std::size_t>> padding_counts(const SemiMetric& m, std::span<const Vertex> boundary,
                                                            double kappa, std::span<const double> alphas,
                                                            std::size_t samples, std::uint64_t seed,
                                                            BlockDiameter mode) {
  std::vector<std::vector<std::size_t>> counts(alphas.size(), std::vector<std::size_t>(boundary.size(), 0));
  for (std::size_t s = 0; s < samples; ++s) {
    const Partition p = sample_partition(m, kappa, mix_seed(seed, s), mode);
    for (std::size_t i = 0; i < boundary.size(); ++i) {
      const double slack = padding_slack(m, p, boundary[i]);
      for (std::size_t g = 0; g < alphas.size(); ++g)
        if (kappa / alphas[g] < slack) ++counts[g][i];
    }
  }
  return counts;
}

}  // namespace detail

/// Monte-Carlo estimate of P[B(x, kappa/alpha) inside P(x)] at every boundary vertex.
inline PaddingReport estimate_padding(const SemiMetric& m, std::span<const Vertex> boundary, double kappa,
                                      double alpha, std::size_t samples, std::uint64_t seed,
                                      double delta_target = 0.5,
                                      BlockDiameter mode = BlockDiameter::OffDiagonal) {
  if (samples < 1) throw Error(ErrorCode::InvalidInput, "need at least one sample");
  if (!(alpha >= 1.0)) throw Error(ErrorCode::InvalidInput, "alpha must be >= 1");
  std::vector<double> alphas{alpha};
  for (double a : alpha_grid())
    if (a <= alpha) alphas.push_back(a);
  const auto counts = detail::padding_counts(m, boundary, kappa, alphas, samples, seed, mode);

  PaddingReport rep;
  rep.kappa = kappa;
  rep.alpha = alpha;
  rep.delta_target = delta_target;
  rep.boundary.assign(boundary.begin(), boundary.end());
  rep.samples = samples;
  rep.seed = seed;
  rep.confidence_halfwidth = hoeffding_halfwidth(samples);
  const double n = static_cast<double>(samples);
  rep.min_pad_probability = 1.0;
  for (std::size_t i = 0; i < boundary.size(); ++i) {
    rep.pad_probability.push_back(static_cast<double>(counts[0][i]) / n);
    rep.min_pad_probability = std::min(rep.min_pad_probability, rep.pad_probability.back());
  }
  for (std::size_t g = 1; g < alphas.size(); ++g) {
    const std::size_t worst = *std::min_element(counts[g].begin(), counts[g].end());
    if (static_cast<double>(worst) / n >= delta_target) {
      rep.best_grid_alpha = alphas[g];
      break;
    }
  }
  return rep;
}

struct AlphaCalibration {
  double alpha = std::numeric_limits<double>::infinity();  ///< +inf when no grid point qualifies
  std::vector<double> grid;
  std::vector<double> min_pad_probability;  ///< per grid point, over boundary vertices
  bool monotone = true;  ///< padding never decreased as the ball shrank
  double confidence_halfwidth = 0.0;
};

/// Smallest alpha on alpha_grid() whose empirical padding probability reaches
/// `delta` at every boundary vertex. All grid points share the same samples.
inline AlphaCalibration calibrate_alpha(const SemiMetric& m, std::span<const Vertex> boundary, double kappa,
                                        double delta, std::size_t samples, std::uint64_t seed,
                                        BlockDiameter mode = BlockDiameter::OffDiagonal) {
  if (!(delta > 0.0 && delta < 1.0)) throw Error(ErrorCode::InvalidInput, "delta must lie in (0, 1)");
  if (samples < 1) throw Error(ErrorCode::InvalidInput, "need at least one sample");
  AlphaCalibration cal;
  cal.grid = alpha_grid();
  cal.confidence_halfwidth = hoeffding_halfwidth(samples);
  const auto counts = detail::padding_counts(m, boundary, kappa, cal.grid, samples, seed, mode);
  const double n = static_cast<double>(samples);
  for (std::size_t g = 0; g < cal.grid.size(); ++g) {
    const std::size_t worst = boundary.empty() ? samples : *std::min_element(counts[g].begin(), counts[g].end());
    cal.min_pad_probability.push_back(static_cast<double>(worst) / n);
    if (g > 0) {
      for (std::size_t i = 0; i < boundary.size(); ++i)
        if (counts[g][i] < counts[g - 1][i]) cal.monotone = false;
    }
    if (!std::isfinite(cal.alpha) && cal.min_pad_probability.back() >= delta) cal.alpha = cal.grid[g];
  }
  return cal;
}

}  // namespace steklov
