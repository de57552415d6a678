#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "steklov/error.hpp"

namespace steklov::detail {

struct QpResult {
  Eigen::VectorXd x;
  Eigen::VectorXd multipliers;  // one per inequality row, >= 0
  double objective = 0.0;
  int iterations = 0;
};

/// Dense primal-dual interior point (Mehrotra predictor-corrector) for
///   minimize 1/2 x'Hx + c'x  subject to  Gx <= h.
/// H must be positive semidefinite and H + G'G positive definite.
inline QpResult solve_qp(const Eigen::MatrixXd& H, const Eigen::VectorXd& c, const Eigen::MatrixXd& G,
                         const Eigen::VectorXd& h, double tol = 1e-10, int max_iter = 200) {
  const Eigen::Index n = H.rows();
  const Eigen::Index m = G.rows();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd s = (h - G * x).cwiseMax(1.0);
  Eigen::VectorXd z = Eigen::VectorXd::Ones(m);

  const double h_scale = 1.0 + h.lpNorm<Eigen::Infinity>();
  const double c_scale = 1.0 + c.lpNorm<Eigen::Infinity>();

  auto max_step = [](const Eigen::VectorXd& v, const Eigen::VectorXd& dv) {
    double a = 1.0;
    for (Eigen::Index i = 0; i < v.size(); ++i)
      if (dv(i) < 0.0) a = std::min(a, -v(i) / dv(i));
    return a;
  };

  for (int it = 0; it < max_iter; ++it) {
    const Eigen::VectorXd rd = H * x + c + G.transpose() * z;
    const Eigen::VectorXd rp = G * x + s - h;
    const double mu = s.dot(z) / static_cast<double>(m);
    if (rp.lpNorm<Eigen::Infinity>() <= tol * h_scale && rd.lpNorm<Eigen::Infinity>() <= tol * c_scale &&
        mu <= tol) {
      return {x, z, 0.5 * x.dot(H * x) + c.dot(x), it};
    }

    const Eigen::VectorXd w = z.cwiseQuotient(s);
    Eigen::MatrixXd K = H + G.transpose() * w.asDiagonal() * G;
    K.diagonal().array() += 1e-14;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(K);
    if (ldlt.info() != Eigen::Success) throw Error(ErrorCode::SolverStalled, "interior point: KKT factorization failed");

    auto direction = [&](const Eigen::VectorXd& rc, Eigen::VectorXd& dx, Eigen::VectorXd& ds, Eigen::VectorXd& dz) {
      const Eigen::VectorXd rhs = -rd - G.transpose() * (w.cwiseProduct(rp) - rc.cwiseQuotient(s));
      dx = ldlt.solve(rhs);
      dz = w.cwiseProduct(G * dx + rp) - rc.cwiseQuotient(s);
      ds = -(rc + s.cwiseProduct(dz)).cwiseQuotient(z);
    };

    Eigen::VectorXd dx, ds, dz;
    direction(s.cwiseProduct(z), dx, ds, dz);
    const double a_aff = std::min(max_step(s, ds), max_step(z, dz));
    const double mu_aff = (s + a_aff * ds).dot(z + a_aff * dz) / static_cast<double>(m);
    const double sigma = std::pow(mu_aff / mu, 3);

    const Eigen::VectorXd rc =
        s.cwiseProduct(z) + ds.cwiseProduct(dz) - Eigen::VectorXd::Constant(m, sigma * mu);
    direction(rc, dx, ds, dz);
    const double a = std::min(1.0, 0.99 * std::min(max_step(s, ds), max_step(z, dz)));
    x += a * dx;
    s += a * ds;
    z += a * dz;
  }
  throw Error(ErrorCode::SolverStalled, "interior point: iteration cap reached");
}

}  // namespace steklov::detail
