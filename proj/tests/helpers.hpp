#pragma once

#include <lrmap/linalg.hpp>
#include <lrmap/rng.hpp>
#include <lrmap/types.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <cstring>

namespace testutil {

using lrmap::Matrix;
using lrmap::Rng;
using lrmap::Vector;

/// Haar-ish random orthogonal matrix from the QR of a Gaussian draw.
inline Matrix random_orthogonal(Rng& rng, int n) {
  const Matrix g = rng.gaussian_matrix(n, n);
  Eigen::HouseholderQR<Matrix> qr(g);
  return qr.householderQ() * Matrix::Identity(n, n);
}

/// Gaussian matrix of exact rank r (r <= min(rows, cols) almost surely).
inline Matrix random_rank(Rng& rng, int rows, int cols, int r) {
  return rng.gaussian_matrix(rows, r) * rng.gaussian_matrix(r, cols);
}

/// Symmetric positive definite matrix with eigenvalues in [lo, hi].
inline Matrix random_spd(Rng& rng, int n, double lo, double hi) {
  const Matrix q = random_orthogonal(rng, n);
  Vector eig(n);
  for (int i = 0; i < n; ++i) eig(i) = lo + (hi - lo) * rng.uniform();
  return q * eig.asDiagonal() * q.transpose();
}

inline bool bitwise_equal(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  if (a.size() == 0) return true;
  return std::memcmp(a.data(), b.data(),
                     sizeof(double) * static_cast<std::size_t>(a.size())) == 0;
}

inline bool bitwise_equal(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) return false;
  if (a.size() == 0) return true;
  return std::memcmp(a.data(), b.data(),
                     sizeof(double) * static_cast<std::size_t>(a.size())) == 0;
}

/// |a - b| <= tol * (1 + |a|), the relative comparison used throughout.
inline bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * (1.0 + std::abs(a));
}

}  // namespace testutil
