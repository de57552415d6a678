#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <string>
#include <thread>
#include <vector>

#include "steklov/bound.hpp"
#include "steklov/generators.hpp"
#include "steklov/spectrum.hpp"

namespace steklov {

/// Generator spec of one member of a named family at the given size.
inline std::string family_instance(const std::string& family, std::size_t size, std::uint64_t seed) {
  if (family == "grid") return "grid:" + std::to_string(size) + ":outer";
  if (family == "star") return "star:" + std::to_string(size);
  if (family == "path") return "path:" + std::to_string(size);
  if (family == "cycle") return "cycle:" + std::to_string(size) + ":2";
  if (family == "torus-grid") return "torus-grid:" + std::to_string(size);
  if (family == "tree") return "tree:random:" + std::to_string(size) + ":" + std::to_string(mix_seed(seed, size) % 1000000007ULL);
  throw Error(ErrorCode::BadSpec, "unknown family '" + family + "'");
}

/// sigma_k |B| / (D k^2) and sigma_k |B| / (D k) for every (size, k) with k <= |B|.
/// Instances run on `workers` threads; row order is (size, k) regardless.
inline std::vector<ScalingRow> scaling_experiment(const std::string& family, const std::vector<std::size_t>& sizes,
                                                  const std::vector<std::size_t>& k_values, double delta,
                                                  std::uint64_t seed, unsigned workers = 1) {
  std::vector<std::vector<ScalingRow>> per_size(sizes.size());
  std::vector<std::exception_ptr> errors(sizes.size());
  std::atomic<std::size_t> next{0};

  auto work = [&]() {
    for (std::size_t i = next++; i < sizes.size(); i = next++) {
      try {
        const std::string spec = family_instance(family, sizes[i], seed);
        const BoundaryGraph g = generate(spec);
        const Eigen::VectorXd sigma = steklov_spectrum(g).eigenvalues;
        const double nb = static_cast<double>(g.boundary().size());
        const double D = static_cast<double>(g.max_degree());
        for (std::size_t k : k_values) {
          if (k < 1 || k > g.boundary().size()) continue;
          ScalingRow row;
          row.instance = spec;
          row.size = sizes[i];
          row.k = k;
          row.sigma_k = sigma(static_cast<Eigen::Index>(k - 1));
          row.boundary_size = g.boundary().size();
          row.max_degree = g.max_degree();
          const double kk = static_cast<double>(k);
          row.ratio = row.sigma_k * nb / (D * kk * kk);
          row.ratio_linear = row.sigma_k * nb / (D * kk);
          row.in_certified_range = k >= 2 && kk <= delta * nb / 4.0;
          per_size[i].push_back(row);
        }
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  workers = std::max(1u, workers);
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < workers; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  std::vector<ScalingRow> rows;
  for (auto& block : per_size) rows.insert(rows.end(), block.begin(), block.end());
  return rows;
}

}  // namespace steklov
