#pragma once

#include <lrmap/linalg.hpp>
#include <lrmap/types.hpp>

namespace lrmap {

/// Result of the rank-constrained regression min ||Y - M X|| over
/// rank(M) <= k in a Schatten p-norm.
///
/// The minimizer is the orthogonal projection of the unconstrained solution
/// Y X^+ onto the span of the top-k left singular vectors of the projected
/// target Y X^+ X. It does not depend on p; only the reported errors do.
struct LowRankSolution {
  Matrix op;           // n x n operator estimate, rank <= k
  Matrix range_basis;  // n x k' orthonormal columns spanning range(op)
  Vector z_sigma;      // full spectrum of the projected target, descending
  int k_requested = 0;
  int rank_x = 0;
  SchattenP p;
  double achieved_error = 0.0;   // ||Y - op X||_p from a fresh SVD of the residual
  double predicted_error = 0.0;  // closed-form error (see predicted_error below)

  int effective_rank() const { return static_cast<int>(range_basis.cols()); }
};

/// Projected regression target Y X^+ X (Y restricted to the row space of X).
Matrix projected_target(const Matrix& x, const Matrix& y,
                        const ToleranceConfig& tol = {});

/// First k' = min(k, numerical_rank(z)) canonical left singular vectors of z.
/// The induced projector basis*basis^T is idempotent and symmetric; k = 0
/// gives an empty basis.
Matrix principal_range_basis(const Matrix& z, int k,
                             const ToleranceConfig& tol = {});

/// Closed-form optimal rank-k solution and both error measurements.
LowRankSolution solve_lowrank(const Matrix& x, const Matrix& y, int k,
                              SchattenP p, const ToleranceConfig& tol = {});

/// Closed-form error value: the p-th-power combination of the spectrum tail
/// of the projected target beyond k with the row-space leftover
/// ||Y (I - X^+ X)||_p,
///
///   ( sum_{i>k} sigma_i^p  +  ||Y (I - X^+X)||_p^p )^(1/p),
///
/// max of the two for p = inf. At p = 2 this is exactly the Pythagorean
/// split of the residual; for p != 2 the two error routes may differ on
/// rank-deficient non-diagonal inputs, which the oracle module measures.
double predicted_error(const Matrix& x, const Matrix& y, int k, SchattenP p,
                       const ToleranceConfig& tol = {});

/// ||Y (I - X^+ X)||_p: the part of Y outside the row space of X, which no
/// choice of M can reduce. Computed from singular values of the matrix.
double nullspace_residual(const Matrix& x, const Matrix& y, SchattenP p,
                          const ToleranceConfig& tol = {});

/// Cross-check form of the same quantity: completes the right singular
/// basis of X to the full source dimension and combines the image norms
/// ( sum_l (sum_j sigma_j(Y)^2 <v_j(Y), v_l(X)>^2)^(p/2) )^(1/p) over the
/// null-space directions l. Coincides with nullspace_residual at p = 2.
double nullspace_residual_expanded(const Matrix& x, const Matrix& y,
                                   SchattenP p,
                                   const ToleranceConfig& tol = {});

/// Optimal rank-k solution under the weighted norm ||K^(1/2) (Y - M X)||_p
/// for a symmetric PSD weight K. With K = I this reduces bit-for-bit to
/// solve_lowrank. achieved_error and predicted_error are reported in the
/// weighted norm.
LowRankSolution solve_weighted(const Matrix& x, const Matrix& y,
                               const Matrix& weight, int k, SchattenP p,
                               const ToleranceConfig& tol = {});

}  // namespace lrmap
