#include <lrmap/solver.hpp>

#include <lrmap/errors.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <string>

namespace lrmap {
namespace {

void check_pair(const Matrix& x, const Matrix& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) {
    throw DimensionMismatch(
        "source/target shape mismatch: x is " + std::to_string(x.rows()) +
        "x" + std::to_string(x.cols()) + ", y is " + std::to_string(y.rows()) +
        "x" + std::to_string(y.cols()));
  }
  if (x.rows() == 0 || x.cols() == 0) {
    throw DimensionMismatch("empty snapshot matrices");
  }
}

void check_k(int k) {
  if (k < 0) {
    throw std::invalid_argument("rank budget k must be nonnegative, got " +
                                std::to_string(k));
  }
}

struct XFactor {
  Matrix pinv;  // q x n
  int rank = 0;
};

XFactor factor_source(const Matrix& x, const ToleranceConfig& tol) {
  SvdFactors f = svd(x);
  XFactor out;
  out.rank = rank_from_sigma(f.sigma, tol);
  Vector inv = Vector::Zero(f.sigma.size());
  for (Eigen::Index i = 0; i < out.rank; ++i) inv(i) = 1.0 / f.sigma(i);
  out.pinv = f.vt.transpose() * inv.asDiagonal() * f.u.transpose();
  return out;
}

// ( tail^p + leftover^p )^(1/p); max of the two at p = inf.
double combine_terms(double tail, double leftover, SchattenP p) {
  Vector pair(2);
  pair << tail, leftover;
  return detail::p_combine(pair, p);
}

double tail_from(const Vector& sigma, int k, SchattenP p) {
  const Eigen::Index start = std::min<Eigen::Index>(k, sigma.size());
  const Vector tail = sigma.segment(start, sigma.size() - start);
  return detail::p_combine(tail, p);
}

LowRankSolution solve_core(const Matrix& x, const Matrix& y,
                           const Matrix& x_pinv, int x_rank, int k,
                           SchattenP p, const ToleranceConfig& tol) {
  LowRankSolution sol;
  sol.k_requested = k;
  sol.rank_x = x_rank;
  sol.p = p;

  // z = y (x_pinv x); associated as (y x_pinv) x so no q x q intermediate
  // is formed when there are many more snapshots than states.
  const Matrix z = (y * x_pinv) * x;
  SvdFactors f = svd(z);
  sol.z_sigma = f.sigma;

  const int kp = std::min<int>(k, rank_from_sigma(f.sigma, tol));
  sol.range_basis = f.u.leftCols(kp);
  sol.op = sol.range_basis *
           (sol.range_basis.transpose() * (y * x_pinv));

  const Matrix residual = y - sol.op * x;
  sol.achieved_error = schatten_norm(residual, p);

  const double leftover = schatten_norm(y - z, p);
  sol.predicted_error = combine_terms(tail_from(f.sigma, k, p), leftover, p);
  return sol;
}

}  // namespace

Matrix projected_target(const Matrix& x, const Matrix& y,
                        const ToleranceConfig& tol) {
  check_pair(x, y);
  return (y * pinv(x, tol)) * x;
}

Matrix principal_range_basis(const Matrix& z, int k,
                             const ToleranceConfig& tol) {
  check_k(k);
  SvdFactors f = svd(z);
  const int kp = std::min<int>(k, rank_from_sigma(f.sigma, tol));
  return f.u.leftCols(kp);
}

LowRankSolution solve_lowrank(const Matrix& x, const Matrix& y, int k,
                              SchattenP p, const ToleranceConfig& tol) {
  check_pair(x, y);
  check_k(k);
  XFactor xf = factor_source(x, tol);
  return solve_core(x, y, xf.pinv, xf.rank, k, p, tol);
}

double predicted_error(const Matrix& x, const Matrix& y, int k, SchattenP p,
                       const ToleranceConfig& tol) {
  check_pair(x, y);
  check_k(k);
  const Matrix z = projected_target(x, y, tol);
  const Vector sigma = svd(z).sigma;
  const double leftover = schatten_norm(y - z, p);
  return combine_terms(tail_from(sigma, k, p), leftover, p);
}

double nullspace_residual(const Matrix& x, const Matrix& y, SchattenP p,
                          const ToleranceConfig& tol) {
  check_pair(x, y);
  return schatten_norm(y - projected_target(x, y, tol), p);
}

double nullspace_residual_expanded(const Matrix& x, const Matrix& y,
                                   SchattenP p, const ToleranceConfig& tol) {
  check_pair(x, y);
  Eigen::JacobiSVD<Matrix> full(x, Eigen::ComputeFullV);
  const Matrix v = full.matrixV();  // q x q, columns complete the row basis
  const int rank = rank_from_sigma(full.singularValues(), tol);

  SvdFactors fy = svd(y);
  const Eigen::Index n_null = v.cols() - rank;
  Vector image_norms(n_null);
  for (Eigen::Index l = 0; l < n_null; ++l) {
    const Vector overlaps = fy.vt * v.col(rank + l);
    image_norms(l) = (fy.sigma.asDiagonal() * overlaps).norm();
  }
  return detail::p_combine(image_norms, p);
}

LowRankSolution solve_weighted(const Matrix& x, const Matrix& y,
                               const Matrix& weight, int k, SchattenP p,
                               const ToleranceConfig& tol) {
  check_pair(x, y);
  check_k(k);
  if (weight.rows() != y.rows() || weight.cols() != y.rows()) {
    throw DimensionMismatch("weight must be " + std::to_string(y.rows()) +
                            "x" + std::to_string(y.rows()) + ", got " +
                            std::to_string(weight.rows()) + "x" +
                            std::to_string(weight.cols()));
  }
  // Exact identity weight short-circuits to the unweighted path so the two
  // entry points agree bit-for-bit, not just to rounding.
  if (weight.isIdentity(0.0)) {
    return solve_lowrank(x, y, k, p, tol);
  }

  const PsdSqrtPair sq = psd_sqrt(weight, tol);
  const Matrix yw = sq.root * y;

  XFactor xf = factor_source(x, tol);
  const Matrix zw = (yw * xf.pinv) * x;
  SvdFactors f = svd(zw);

  LowRankSolution sol;
  sol.k_requested = k;
  sol.rank_x = xf.rank;
  sol.p = p;
  sol.z_sigma = f.sigma;

  const int kp = std::min<int>(k, rank_from_sigma(f.sigma, tol));
  const Matrix basis_w = f.u.leftCols(kp);  // orthonormal in weighted space
  sol.op = sq.pinv_root * (basis_w * (basis_w.transpose() * (yw * xf.pinv)));
  // Back in the unweighted space the range is spanned by pinv_root * basis_w,
  // which need not be orthonormal; re-orthonormalize for the reported basis.
  sol.range_basis = principal_range_basis(sq.pinv_root * basis_w, kp, tol);

  sol.achieved_error = schatten_norm(sq.root * (y - sol.op * x), p);
  const double leftover = schatten_norm(yw - zw, p);
  sol.predicted_error = combine_terms(tail_from(f.sigma, k, p), leftover, p);
  return sol;
}

}  // namespace lrmap
