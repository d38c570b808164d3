#include <lrmap/kernel.hpp>

#include <lrmap/errors.hpp>
#include <lrmap/linalg.hpp>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <string>
#include <vector>

namespace lrmap {
namespace {

bool spectral_before(const std::complex<double>& a,
                     const std::complex<double>& b) {
  const double ma = std::abs(a);
  const double mb = std::abs(b);
  if (ma != mb) return ma > mb;
  if (a.real() != b.real()) return a.real() > b.real();
  return a.imag() > b.imag();
}

// Largest-|entry| coordinate made nonnegative (real) or real-positive
// (complex); first occurrence wins ties so repeated runs agree exactly.
void canonicalize(Eigen::Ref<Vector> v) {
  Eigen::Index pivot = 0;
  double best = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double a = std::abs(v(i));
    if (a > best) {
      best = a;
      pivot = i;
    }
  }
  if (v.size() > 0 && v(pivot) < 0.0) v = -v;
}

void canonicalize_phase(Eigen::Ref<ComplexVector> v) {
  Eigen::Index pivot = 0;
  double best = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double a = std::abs(v(i));
    if (a > best) {
      best = a;
      pivot = i;
    }
  }
  if (v.size() == 0 || best <= 0.0) return;
  v *= std::conj(v(pivot)) / std::abs(v(pivot));
}

void require_finite(const Matrix& g, const char* which) {
  if (!g.allFinite()) {
    throw KernelEvalFailure(std::string("kernel matrix ") + which +
                            " has non-finite entries");
  }
}

}  // namespace

KernelSpec KernelSpec::linear() { return KernelSpec(); }

KernelSpec KernelSpec::polynomial(int degree, double offset) {
  if (degree < 1) {
    throw std::invalid_argument("polynomial kernel degree must be >= 1");
  }
  if (offset < 0.0 || !std::isfinite(offset)) {
    throw std::invalid_argument("polynomial kernel offset must be >= 0");
  }
  KernelSpec k;
  k.kind_ = KernelKind::Polynomial;
  k.degree_ = degree;
  k.offset_ = offset;
  return k;
}

KernelSpec KernelSpec::gaussian(double bandwidth) {
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
    throw std::invalid_argument("gaussian kernel bandwidth must be > 0");
  }
  KernelSpec k;
  k.kind_ = KernelKind::Gaussian;
  k.bandwidth_ = bandwidth;
  return k;
}

double KernelSpec::operator()(const Eigen::Ref<const Vector>& a,
                              const Eigen::Ref<const Vector>& b) const {
  if (a.size() != b.size()) {
    throw DimensionMismatch("kernel arguments have different dimensions");
  }
  switch (kind_) {
    case KernelKind::Linear:
      return a.dot(b);
    case KernelKind::Polynomial:
      return std::pow(a.dot(b) + offset_, degree_);
    case KernelKind::Gaussian: {
      const double d2 = (a - b).squaredNorm();
      return std::exp(-d2 / (2.0 * bandwidth_ * bandwidth_));
    }
  }
  return 0.0;
}

Matrix gram(const KernelSpec& kernel, const Matrix& a_points,
            const Matrix& b_points) {
  if (a_points.rows() != b_points.rows()) {
    throw DimensionMismatch("point sets live in different dimensions");
  }
  Matrix g(a_points.cols(), b_points.cols());
  for (Eigen::Index i = 0; i < a_points.cols(); ++i) {
    for (Eigen::Index j = 0; j < b_points.cols(); ++j) {
      g(i, j) = kernel(a_points.col(i), b_points.col(j));
    }
  }
  require_finite(g, "gram");
  return g;
}

KernelSolution kernel_lowrank_solve(const KernelSpec& kernel,
                                    const Matrix& x_points,
                                    const Matrix& y_points, int k,
                                    const ToleranceConfig& tol) {
  if (x_points.cols() != y_points.cols() ||
      x_points.rows() != y_points.rows()) {
    throw DimensionMismatch("paired samples must share shape");
  }
  if (x_points.cols() == 0) {
    throw TooFewSnapshots("need at least one sample pair");
  }
  if (k < 0) {
    throw std::invalid_argument("rank budget k must be nonnegative");
  }
  const Eigen::Index q = x_points.cols();

  const Matrix g_xx = gram(kernel, x_points, x_points);
  const Matrix g_yy = gram(kernel, y_points, y_points);
  const Matrix g_yx = gram(kernel, y_points, x_points);

  // Range projector and pseudo-inverse of G_XX from one eigendecomposition;
  // eigenvalues below rank_rtol times the largest count as zero.
  Eigen::SelfAdjointEigenSolver<Matrix> ex(0.5 * (g_xx + g_xx.transpose()));
  if (ex.info() != Eigen::Success) {
    throw NonConvergence("eigendecomposition of G_XX failed");
  }
  const Vector lam = ex.eigenvalues();  // ascending
  const double lam_max = std::max(0.0, lam(q - 1));
  if (lam(0) < -tol.psd_atol * std::max(1.0, lam_max)) {
    throw NotPsd("G_XX has eigenvalue " + std::to_string(lam(0)));
  }
  const double x_cut = tol.rank_rtol * lam_max;
  int rank_x = 0;
  for (Eigen::Index i = 0; i < q; ++i) {
    if (lam(i) > x_cut) ++rank_x;
  }
  const Matrix wr = ex.eigenvectors().rightCols(rank_x);
  Vector lam_inv(rank_x);
  for (int i = 0; i < rank_x; ++i) lam_inv(i) = 1.0 / lam(q - rank_x + i);
  const Matrix proj = wr * wr.transpose();             // onto range(G_XX)
  const Matrix g_xx_pinv = wr * lam_inv.asDiagonal() * wr.transpose();

  Eigen::SelfAdjointEigenSolver<Matrix> ey(0.5 * (g_yy + g_yy.transpose()));
  if (ey.info() != Eigen::Success) {
    throw NonConvergence("eigendecomposition of G_YY failed");
  }
  if (ey.eigenvalues()(0) <
      -tol.psd_atol * std::max(1.0, ey.eigenvalues()(q - 1))) {
    throw NotPsd("G_YY has eigenvalue " + std::to_string(ey.eigenvalues()(0)));
  }

  // Squared singular values of the projected target are the eigenvalues of
  // Pi G_YY Pi; its eigenvectors carry the left-singular coefficients.
  const Matrix a = proj * g_yy * proj;
  Eigen::SelfAdjointEigenSolver<Matrix> ea(0.5 * (a + a.transpose()));
  if (ea.info() != Eigen::Success) {
    throw NonConvergence("eigendecomposition of the projected target failed");
  }
  const Vector mu = ea.eigenvalues();  // ascending
  const double mu_max = std::max(0.0, mu(q - 1));
  const double z_cut = tol.rank_rtol * mu_max;

  KernelSolution sol;
  sol.rank_x = rank_x;
  sol.z_sigma = Vector(q);
  for (Eigen::Index i = 0; i < q; ++i) {
    sol.z_sigma(i) = std::sqrt(std::max(0.0, mu(q - 1 - i)));
  }
  int r_z = 0;
  for (Eigen::Index i = 0; i < q; ++i) {
    if (mu(i) > z_cut) ++r_z;
  }
  const int kp = std::min(k, r_z);
  sol.effective_rank = kp;

  sol.coeff_projector = Matrix(q, kp);
  for (int i = 0; i < kp; ++i) {
    Vector c = proj * ea.eigenvectors().col(q - 1 - i) / sol.z_sigma(i);
    canonicalize(c);
    sol.coeff_projector.col(i) = c;
  }

  double retained = 0.0;
  for (int i = 0; i < kp; ++i) retained += sol.z_sigma(i) * sol.z_sigma(i);
  sol.achieved_error_sq = std::max(0.0, g_yy.trace() - retained);

  if (kp == 0) {
    sol.eigenvalues = ComplexVector(0);
    sol.eigfn_coeffs = ComplexMatrix(q, 0);
    return sol;
  }

  // Propagator compressed to the retained range: C^T G_YY G_XX^+ G_YX^T C.
  const Matrix& c = sol.coeff_projector;
  const Matrix compressed =
      c.transpose() * (g_yy * (g_xx_pinv * (g_yx.transpose() * c)));

  Eigen::EigenSolver<Matrix> es(compressed);
  Eigen::EigenSolver<Matrix> es_left(compressed.transpose());
  if (es.info() != Eigen::Success || es_left.info() != Eigen::Success) {
    throw NonConvergence("eigenvalue iteration failed on compressed propagator");
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(kp));
  std::iota(order.begin(), order.end(), 0);
  const ComplexVector ev = es.eigenvalues();
  std::stable_sort(order.begin(), order.end(),
                   [&ev](Eigen::Index i, Eigen::Index j) {
                     return spectral_before(ev(i), ev(j));
                   });
  std::vector<Eigen::Index> order_left(static_cast<std::size_t>(kp));
  std::iota(order_left.begin(), order_left.end(), 0);
  const ComplexVector evl = es_left.eigenvalues();
  std::stable_sort(order_left.begin(), order_left.end(),
                   [&evl](Eigen::Index i, Eigen::Index j) {
                     return spectral_before(evl(i), evl(j));
                   });

  sol.eigenvalues = ComplexVector(kp);
  sol.eigfn_coeffs = ComplexMatrix(q, kp);
  // Coefficient map from a left eigenvector of the compressed propagator to
  // kernel-section weights at the training inputs.
  const Matrix lift = g_xx_pinv * (g_yy * c);
  const ComplexMatrix g_xx_c = g_xx.cast<std::complex<double>>();
  for (int i = 0; i < kp; ++i) {
    sol.eigenvalues(i) = ev(order[static_cast<std::size_t>(i)]);
    const ComplexVector b =
        es_left.eigenvectors().col(order_left[static_cast<std::size_t>(i)]);
    ComplexVector coeffs = lift.cast<std::complex<double>>() * b;
    const double h_norm_sq =
        std::real(coeffs.dot(g_xx_c * coeffs));  // dot conjugates lhs
    if (h_norm_sq > 0.0) coeffs /= std::sqrt(h_norm_sq);
    canonicalize_phase(coeffs);
    sol.eigfn_coeffs.col(i) = coeffs;
  }
  return sol;
}

ComplexVector eigenfunction_eval(const KernelSolution& sol,
                                 const KernelSpec& kernel,
                                 const Matrix& x_points, const Vector& point) {
  if (point.size() != x_points.rows()) {
    throw DimensionMismatch("query point dimension does not match training data");
  }
  if (sol.eigfn_coeffs.rows() != x_points.cols()) {
    throw DimensionMismatch("solution was built from a different sample count");
  }
  Vector sections(x_points.cols());
  for (Eigen::Index j = 0; j < x_points.cols(); ++j) {
    sections(j) = kernel(x_points.col(j), point);
  }
  if (!sections.allFinite()) {
    throw KernelEvalFailure("kernel section evaluation produced non-finite values");
  }
  return sol.eigfn_coeffs.transpose() * sections.cast<std::complex<double>>();
}

}  // namespace lrmap
