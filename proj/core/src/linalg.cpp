#include <lrmap/linalg.hpp>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>

namespace lrmap {

namespace {

void canonicalize_signs(Matrix& u, Matrix& vt) {
  for (Eigen::Index j = 0; j < u.cols(); ++j) {
    Eigen::Index pivot = 0;
    double best = std::abs(u(0, j));
    for (Eigen::Index i = 1; i < u.rows(); ++i) {
      if (std::abs(u(i, j)) > best) {
        best = std::abs(u(i, j));
        pivot = i;
      }
    }
    if (u(pivot, j) < 0.0) {
      u.col(j) = -u.col(j);
      vt.row(j) = -vt.row(j);
    }
  }
}

bool exactly_diagonal(const Matrix& k) {
  for (Eigen::Index i = 0; i < k.rows(); ++i) {
    for (Eigen::Index j = 0; j < k.cols(); ++j) {
      if (i != j && k(i, j) != 0.0) return false;
    }
  }
  return true;
}

}  // namespace

SvdFactors svd(const Matrix& a) {
  if (a.rows() == 0 || a.cols() == 0) {
    throw std::invalid_argument("svd: empty matrix");
  }
  Eigen::JacobiSVD<Matrix> dec(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (dec.info() != Eigen::Success) {
    throw NonConvergence("svd: factorization did not converge");
  }
  SvdFactors f;
  f.u = dec.matrixU();
  f.sigma = dec.singularValues();
  f.vt = dec.matrixV().transpose();
  if (!f.sigma.allFinite() || !f.u.allFinite() || !f.vt.allFinite()) {
    throw NonConvergence("svd: non-finite factors (ill-posed input)");
  }
  canonicalize_signs(f.u, f.vt);
  return f;
}

int rank_from_sigma(const Vector& sigma, const ToleranceConfig& tol) {
  if (sigma.size() == 0) return 0;
  const double cut = tol.rank_rtol * sigma(0);
  int r = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > cut) ++r;
  }
  return r;
}

int numerical_rank(const Matrix& a, const ToleranceConfig& tol) {
  return rank_from_sigma(svd(a).sigma, tol);
}

Matrix pinv(const Matrix& a, const ToleranceConfig& tol) {
  const SvdFactors f = svd(a);
  const double cut = f.sigma.size() > 0 ? tol.rank_rtol * f.sigma(0) : 0.0;
  Vector inv(f.sigma.size());
  for (Eigen::Index i = 0; i < f.sigma.size(); ++i) {
    inv(i) = f.sigma(i) > cut ? 1.0 / f.sigma(i) : 0.0;
  }
  return f.vt.transpose() * inv.asDiagonal() * f.u.transpose();
}

double detail::p_combine(const Vector& values, SchattenP p) {
  if (values.size() == 0) return 0.0;
  const double top = values.maxCoeff();
  if (top <= 0.0) return 0.0;
  if (p.is_spectral()) return top;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    sum += std::pow(values(i) / top, p.value());
  }
  return top * std::pow(sum, 1.0 / p.value());
}

double schatten_from_sigma(const Vector& sigma, SchattenP p) {
  return detail::p_combine(sigma, p);
}

double schatten_norm(const Matrix& a, SchattenP p) {
  return schatten_from_sigma(svd(a).sigma, p);
}

double basis_image_norm(const Matrix& a, SchattenP p, const Matrix& basis) {
  if (basis.rows() != a.cols()) {
    throw DimensionMismatch("basis_image_norm: basis rows must match cols");
  }
  Vector norms(basis.cols());
  for (Eigen::Index j = 0; j < basis.cols(); ++j) {
    norms(j) = (a * basis.col(j)).norm();
  }
  return detail::p_combine(norms, p);
}

PsdSqrtPair psd_sqrt(const Matrix& k, const ToleranceConfig& tol) {
  if (k.rows() != k.cols()) {
    throw NotSymmetric("psd_sqrt: matrix is not square");
  }
  const double asym = (k - k.transpose()).cwiseAbs().maxCoeff();
  if (asym > tol.psd_atol) {
    throw NotSymmetric("psd_sqrt: asymmetry exceeds tolerance");
  }

  Vector lambda;
  Matrix vectors;
  if (exactly_diagonal(k)) {
    // Diagonal weights (identity included) factor exactly, which keeps the
    // weighted solver bit-identical to the unweighted one for K = I.
    lambda = k.diagonal();
    vectors = Matrix::Identity(k.rows(), k.cols());
  } else {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (k + k.transpose()));
    if (eig.info() != Eigen::Success) {
      throw NonConvergence("psd_sqrt: eigendecomposition failed");
    }
    lambda = eig.eigenvalues();
    vectors = eig.eigenvectors();
  }

  double lambda_max = 0.0;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (lambda(i) < -tol.psd_atol) {
      throw NotPsd("psd_sqrt: eigenvalue below -psd_atol");
    }
    if (lambda(i) < 0.0) lambda(i) = 0.0;
    lambda_max = std::max(lambda_max, lambda(i));
  }

  const double cut = tol.rank_rtol * lambda_max;
  Vector root_diag(lambda.size()), pinv_diag(lambda.size());
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    root_diag(i) = std::sqrt(lambda(i));
    pinv_diag(i) = lambda(i) > cut ? 1.0 / root_diag(i) : 0.0;
  }

  PsdSqrtPair out;
  if (vectors.isIdentity(0.0)) {
    out.root = root_diag.asDiagonal();
    out.pinv_root = pinv_diag.asDiagonal();
  } else {
    out.root = vectors * root_diag.asDiagonal() * vectors.transpose();
    out.pinv_root = vectors * pinv_diag.asDiagonal() * vectors.transpose();
  }
  return out;
}

}  // namespace lrmap
