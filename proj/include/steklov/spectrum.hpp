#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "steklov/error.hpp"
#include "steklov/graph.hpp"

namespace steklov {

/// Absolute threshold below which an eigenvalue counts as zero.
inline constexpr double kZeroEigenvalueTol = 1e-10;

/// Combinatorial Laplacian: deg(x) on the diagonal, -1 for each edge.
inline Eigen::MatrixXd laplacian(const BoundaryGraph& g) {
  const auto n = static_cast<Eigen::Index>(g.vertex_count());
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : g.edges()) {
    const auto u = static_cast<Eigen::Index>(e.u), v = static_cast<Eigen::Index>(e.v);
    L(u, v) = L(v, u) = -1.0;
    L(u, u) += 1.0;
    L(v, v) += 1.0;
  }
  return L;
}

namespace detail {

struct LaplacianBlocks {
  Eigen::MatrixXd bb, bo, oo;
};

inline LaplacianBlocks split_laplacian(const BoundaryGraph& g) {
  const Eigen::MatrixXd L = laplacian(g);
  const auto& B = g.boundary();
  const auto& O = g.interior();
  const auto nb = static_cast<Eigen::Index>(B.size()), no = static_cast<Eigen::Index>(O.size());
  LaplacianBlocks blk{Eigen::MatrixXd(nb, nb), Eigen::MatrixXd(nb, no), Eigen::MatrixXd(no, no)};
  for (Eigen::Index i = 0; i < nb; ++i) {
    for (Eigen::Index j = 0; j < nb; ++j) blk.bb(i, j) = L(B[i], B[j]);
    for (Eigen::Index j = 0; j < no; ++j) blk.bo(i, j) = L(B[i], O[j]);
  }
  for (Eigen::Index i = 0; i < no; ++i)
    for (Eigen::Index j = 0; j < no; ++j) blk.oo(i, j) = L(O[i], O[j]);
  return blk;
}

inline Eigen::LLT<Eigen::MatrixXd> factor_interior(const Eigen::MatrixXd& oo) {
  Eigen::LLT<Eigen::MatrixXd> llt(oo);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorCode::SingularInteriorBlock, "interior Laplacian block is not positive definite");
  return llt;
}

}  // namespace detail

/// Harmonic extension of boundary data `f_b` (indexed like g.boundary()) to all of V.
inline Eigen::VectorXd harmonic_extension(const BoundaryGraph& g, const Eigen::VectorXd& f_b) {
  if (static_cast<std::size_t>(f_b.size()) != g.boundary().size())
    throw Error(ErrorCode::DimensionMismatch, "boundary data has wrong length");
  const auto blk = detail::split_laplacian(g);
  const auto llt = detail::factor_interior(blk.oo);
  const Eigen::VectorXd f_o = llt.solve(-blk.bo.transpose() * f_b);
  Eigen::VectorXd f(static_cast<Eigen::Index>(g.vertex_count()));
  for (std::size_t i = 0; i < g.boundary().size(); ++i) f(g.boundary()[i]) = f_b(i);
  for (std::size_t i = 0; i < g.interior().size(); ++i) f(g.interior()[i]) = f_o(i);
  return f;
}

/// Dirichlet-to-Neumann matrix L_BB - L_BO L_OO^{-1} L_OB, indexed like g.boundary().
inline Eigen::MatrixXd dtn_operator(const BoundaryGraph& g) {
  const auto blk = detail::split_laplacian(g);
  const auto llt = detail::factor_interior(blk.oo);
  Eigen::MatrixXd lambda = blk.bb - blk.bo * llt.solve(blk.bo.transpose());
  return 0.5 * (lambda + lambda.transpose());
}

struct SpectrumResult {
  Eigen::VectorXd eigenvalues;     ///< ascending, sigma_1 ... sigma_|B|
  Eigen::MatrixXd boundary_modes;  ///< orthonormal eigenvectors of the DtN matrix (columns)
  Eigen::MatrixXd eigenfunctions;  ///< harmonic extensions of the columns above, |V| x |B|
  Eigen::VectorXd residuals;       ///< ||L f - sigma f~||_inf per pair
};

inline SpectrumResult steklov_spectrum(const BoundaryGraph& g) {
  const Eigen::MatrixXd lambda = dtn_operator(g);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(lambda);
  if (es.info() != Eigen::Success)
    throw Error(ErrorCode::EigenSolverFailure, "DtN eigensolver did not converge");

  SpectrumResult out;
  out.eigenvalues = es.eigenvalues();
  out.boundary_modes = es.eigenvectors();

  const auto blk = detail::split_laplacian(g);
  const auto llt = detail::factor_interior(blk.oo);
  const Eigen::MatrixXd interior_vals = llt.solve(-blk.bo.transpose() * out.boundary_modes);
  const auto n = static_cast<Eigen::Index>(g.vertex_count());
  const auto nb = static_cast<Eigen::Index>(g.boundary().size());
  out.eigenfunctions.resize(n, nb);
  for (std::size_t i = 0; i < g.boundary().size(); ++i)
    out.eigenfunctions.row(g.boundary()[i]) = out.boundary_modes.row(i);
  for (std::size_t i = 0; i < g.interior().size(); ++i)
    out.eigenfunctions.row(g.interior()[i]) = interior_vals.row(i);

  const Eigen::MatrixXd L = laplacian(g);
  out.residuals.resize(nb);
  for (Eigen::Index j = 0; j < nb; ++j) {
    Eigen::VectorXd lhs = L * out.eigenfunctions.col(j);
    for (Vertex b : g.boundary()) lhs(b) -= out.eigenvalues(j) * out.eigenfunctions(b, j);
    out.residuals(j) = lhs.cwiseAbs().maxCoeff();
  }
  return out;
}

/// Steklov eigenvalues from the pencil L f = sigma D_B f without forming the
/// Schur complement: D_B f = tau (L + D_B) f has tau = 1/(1 + sigma) on the
/// finite spectrum and tau = 0 on the |interior| infinite eigenvalues.
inline Eigen::VectorXd generalized_steklov_eigenvalues(const BoundaryGraph& g) {
  const Eigen::MatrixXd L = laplacian(g);
  const auto n = static_cast<Eigen::Index>(g.vertex_count());
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
  for (Vertex b : g.boundary()) D(b, b) = 1.0;
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(D, L + D);
  if (ges.info() != Eigen::Success)
    throw Error(ErrorCode::EigenSolverFailure, "generalized eigensolver did not converge");
  const auto nb = static_cast<Eigen::Index>(g.boundary().size());
  // tau is ascending; the |B| largest belong to the finite spectrum.
  Eigen::VectorXd sigma(nb);
  for (Eigen::Index j = 0; j < nb; ++j) {
    const double tau = ges.eigenvalues()(n - 1 - j);
    sigma(j) = 1.0 / tau - 1.0;
  }
  return sigma;
}

/// Edge energy over boundary mass; +inf when f vanishes on B.
inline double rayleigh_quotient(const BoundaryGraph& g, const Eigen::VectorXd& f) {
  if (static_cast<std::size_t>(f.size()) != g.vertex_count())
    throw Error(ErrorCode::DimensionMismatch, "function has wrong length");
  if ((f.array() == 0.0).all()) throw Error(ErrorCode::ZeroFunction, "Rayleigh quotient of zero");
  double num = 0.0;
  for (const auto& e : g.edges()) {
    const double d = f(e.u) - f(e.v);
    num += d * d;
  }
  double den = 0.0;
  for (Vertex b : g.boundary()) den += f(b) * f(b);
  if (den == 0.0) return std::numeric_limits<double>::infinity();
  return num / den;
}

struct AngleWitness {
  std::size_t index;  ///< zero-based column of the witnessing vector
  double sin2;        ///< ||v - P_W v||^2 / ||v||^2
};

/// Among k pairwise-orthogonal vectors (columns of `vectors`) find one whose
/// angle to the (k-1)-dimensional span of `w` has sin^2 >= 1/k.
inline AngleWitness subspace_angle_witness(const Eigen::MatrixXd& vectors, const Eigen::MatrixXd& w) {
  const auto n = vectors.rows();
  const auto k = vectors.cols();
  if (k < 2 || k > n) throw Error(ErrorCode::DimensionMismatch, "need 2 <= k <= n");
  if (w.rows() != n || w.cols() != k - 1)
    throw Error(ErrorCode::DimensionMismatch, "subspace basis must be n x (k-1)");
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(w);
  if (qr.rank() != k - 1) throw Error(ErrorCode::DimensionMismatch, "subspace basis is rank deficient");

  for (Eigen::Index i = 0; i < k; ++i) {
    const double ni = vectors.col(i).norm();
    if (ni == 0.0) throw Error(ErrorCode::NotOrthogonal, "zero vector in family");
    for (Eigen::Index j = i + 1; j < k; ++j) {
      const double nj = vectors.col(j).norm();
      if (std::abs(vectors.col(i).dot(vectors.col(j))) > 1e-9 * ni * nj)
        throw Error(ErrorCode::NotOrthogonal, "family is not pairwise orthogonal");
    }
  }

  const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, k - 1);
  AngleWitness best{0, -1.0};
  for (Eigen::Index i = 0; i < k; ++i) {
    const Eigen::VectorXd v = vectors.col(i);
    const Eigen::VectorXd resid = v - q * (q.transpose() * v);
    const double s2 = resid.squaredNorm() / v.squaredNorm();
    if (s2 > best.sin2) best = {static_cast<std::size_t>(i), s2};
  }
  return best;
}

struct RayleighFamilyCheck {
  double max_rayleigh;
  double sigma_k;
  bool holds;  ///< sigma_k <= k * max_rayleigh
};

/// Check sigma_k <= k * max_i R(v_i) for a family of disjointly supported
/// functions (columns of `family`), each touching the boundary.
inline RayleighFamilyCheck check_rayleigh_family(const BoundaryGraph& g, const Eigen::MatrixXd& family,
                                          double slack = 1e-9) {
  const auto k = family.cols();
  if (static_cast<std::size_t>(family.rows()) != g.vertex_count())
    throw Error(ErrorCode::DimensionMismatch, "family rows must equal |V|");
  if (k < 2 || static_cast<std::size_t>(k) > g.boundary().size())
    throw Error(ErrorCode::DimensionMismatch, "need 2 <= k <= |B|");
  std::vector<int> owner(g.vertex_count(), -1);
  for (Eigen::Index i = 0; i < k; ++i) {
    bool meets_boundary = false;
    for (Vertex x = 0; x < g.vertex_count(); ++x) {
      if (family(static_cast<Eigen::Index>(x), i) == 0.0) continue;
      if (owner[x] != -1) throw Error(ErrorCode::SupportsOverlap, "supports are not disjoint");
      owner[x] = static_cast<int>(i);
      meets_boundary = meets_boundary || g.is_boundary(x);
    }
    if (!meets_boundary) throw Error(ErrorCode::SupportMissesBoundary, "a support misses B");
  }
  double best = 0.0;
  for (Eigen::Index i = 0; i < k; ++i) best = std::max(best, rayleigh_quotient(g, family.col(i)));
  const double sigma_k = steklov_spectrum(g).eigenvalues(k - 1);
  return {best, sigma_k, sigma_k <= static_cast<double>(k) * best + slack};
}

}  // namespace steklov
