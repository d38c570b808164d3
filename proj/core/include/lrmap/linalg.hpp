#pragma once

#include <lrmap/errors.hpp>
#include <lrmap/types.hpp>

namespace lrmap {

/// Thin SVD A = u * diag(sigma) * vt with r = min(rows, cols) factors.
///
/// Factors are canonicalized so identical inputs give bit-identical output:
/// sigma descending, and in each column of u the entry of largest absolute
/// value is nonnegative (ties broken by lowest row index), with the matching
/// row of vt flipped alongside.
struct SvdFactors {
  Matrix u;      // rows x r, orthonormal columns
  Vector sigma;  // length r, descending, nonnegative
  Matrix vt;     // r x cols, orthonormal rows

  Matrix reconstruct() const { return u * sigma.asDiagonal() * vt; }
};

/// Computes the canonical thin SVD. Throws NonConvergence when the
/// factorization fails or produces non-finite values.
SvdFactors svd(const Matrix& a);

/// Number of singular values above rank_rtol * sigma_max (0 for the zero
/// matrix).
int numerical_rank(const Matrix& a, const ToleranceConfig& tol = {});

/// Rank count applied to an already computed descending spectrum.
int rank_from_sigma(const Vector& sigma, const ToleranceConfig& tol = {});

/// Moore-Penrose pseudoinverse, reciprocating only singular values above
/// rank_rtol * sigma_max. The zero matrix maps to the zero matrix.
Matrix pinv(const Matrix& a, const ToleranceConfig& tol = {});

/// Schatten p-norm computed from singular values: (sum sigma_i^p)^(1/p),
/// or sigma_max for p = inf.
double schatten_norm(const Matrix& a, SchattenP p);

/// Same norm evaluated on a precomputed nonnegative spectrum.
double schatten_from_sigma(const Vector& sigma, SchattenP p);

/// Diagnostic form (sum_i ||a * b_i||_2^p)^(1/p) over the columns b_i of an
/// orthonormal basis. Coincides with schatten_norm for every orthonormal
/// basis only at p = 2; exposed for that equality check.
double basis_image_norm(const Matrix& a, SchattenP p, const Matrix& basis);

/// Symmetric PSD square root and its pseudoinverse.
struct PsdSqrtPair {
  Matrix root;       // K^(1/2), symmetric PSD
  Matrix pinv_root;  // (K^(1/2))^+
};

/// Factorizes a symmetric PSD matrix as K = root * root. Eigenvalues in
/// [-psd_atol, 0) are clipped to zero; anything below -psd_atol throws
/// NotPsd. A matrix that is not symmetric to psd_atol throws NotSymmetric.
PsdSqrtPair psd_sqrt(const Matrix& k, const ToleranceConfig& tol = {});

namespace detail {
/// (sum v_i^p)^(1/p) over nonnegative values, max for p = inf, with the
/// usual rescaling by the largest entry to avoid overflow.
double p_combine(const Vector& values, SchattenP p);
}  // namespace detail

}  // namespace lrmap
