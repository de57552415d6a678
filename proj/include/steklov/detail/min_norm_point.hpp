#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cstddef>
#include <vector>

#include "steklov/error.hpp"

namespace steklov::detail {

struct OracleAnswer {
  Eigen::VectorXd point;
  std::size_t id;  ///< caller-side handle, equal ids mean equal points
};

struct MinNormResult {
  Eigen::VectorXd x;
  std::vector<std::size_t> ids;  ///< corral members
  std::vector<double> weights;   ///< convex weights of the corral, summing to 1
  double gap = 0.0;              ///< ||x||^2 - min_a <x, a> at termination, >= 0 up to rounding
  int iterations = 0;
};

/// Wolfe's minimum-norm-point algorithm over the convex hull of a (possibly
/// implicit) point set, accessed through a linear minimization oracle
/// `oracle(x) -> OracleAnswer` returning a point minimizing <x, a>.
template <class Oracle>
MinNormResult min_norm_point(Oracle&& oracle, const Eigen::VectorXd& probe, double rel_tol = 1e-12,
                             int max_iter = 100000) {
  std::vector<Eigen::VectorXd> pts;
  std::vector<std::size_t> ids;
  std::vector<double> lam;

  OracleAnswer first = oracle(probe);
  pts.push_back(first.point);
  ids.push_back(first.id);
  lam.push_back(1.0);
  Eigen::VectorXd x = first.point;

  auto combine = [&]() {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(x.size());
    for (std::size_t i = 0; i < pts.size(); ++i) out += lam[i] * pts[i];
    return out;
  };

  for (int it = 0; it < max_iter; ++it) {
    OracleAnswer a = oracle(x);
    const double xx = x.squaredNorm();
    const double gap = xx - x.dot(a.point);
    if (gap <= rel_tol * std::max(xx, 1e-300) ||
        std::find(ids.begin(), ids.end(), a.id) != ids.end()) {
      return {x, ids, lam, std::max(gap, 0.0), it};
    }
    pts.push_back(a.point);
    ids.push_back(a.id);
    lam.push_back(0.0);

    // Minor cycles: move to the affine minimizer of the corral, dropping
    // members whenever it leaves the convex hull.
    for (;;) {
      const auto k = static_cast<Eigen::Index>(pts.size());
      Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(k + 1, k + 1);
      for (Eigen::Index i = 0; i < k; ++i) {
        for (Eigen::Index j = 0; j <= i; ++j) kkt(i, j) = kkt(j, i) = pts[i].dot(pts[j]);
        kkt(i, k) = kkt(k, i) = 1.0;
      }
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k + 1);
      rhs(k) = 1.0;
      Eigen::VectorXd alpha = kkt.completeOrthogonalDecomposition().solve(rhs).head(k);
      alpha /= alpha.sum();

      if ((alpha.array() > 1e-15).all()) {
        for (Eigen::Index i = 0; i < k; ++i) lam[i] = alpha(i);
        x = combine();
        break;
      }
      double theta = 1.0;
      for (Eigen::Index i = 0; i < k; ++i)
        if (alpha(i) <= 1e-15 && lam[i] - alpha(i) > 0.0) theta = std::min(theta, lam[i] / (lam[i] - alpha(i)));
      for (Eigen::Index i = 0; i < k; ++i) lam[i] = (1.0 - theta) * lam[i] + theta * alpha(i);

      std::size_t keep = 0;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        if (lam[i] > 1e-15) {
          pts[keep] = pts[i];
          ids[keep] = ids[i];
          lam[keep] = lam[i];
          ++keep;
        }
      }
      if (keep == 0) throw Error(ErrorCode::SolverStalled, "min-norm point: corral collapsed");
      pts.resize(keep);
      ids.resize(keep);
      lam.resize(keep);
      double total = 0.0;
      for (double l : lam) total += l;
      for (double& l : lam) l /= total;
      x = combine();
      if (keep == 1) break;
    }
  }
  throw Error(ErrorCode::SolverStalled, "min-norm point: iteration cap reached");
}

}  // namespace steklov::detail
