#pragma once

#include <lrmap/types.hpp>

#include <Eigen/Dense>

namespace lrmap {

enum class KernelKind { Linear, Polynomial, Gaussian };

/// Positive-definite kernel on R^d. Polynomial is (a.b + offset)^degree,
/// Gaussian is exp(-||a-b||^2 / (2 bandwidth^2)).
class KernelSpec {
 public:
  static KernelSpec linear();
  static KernelSpec polynomial(int degree, double offset);
  static KernelSpec gaussian(double bandwidth);

  double operator()(const Eigen::Ref<const Vector>& a,
                    const Eigen::Ref<const Vector>& b) const;

  KernelKind kind() const { return kind_; }
  int degree() const { return degree_; }
  double offset() const { return offset_; }
  double bandwidth() const { return bandwidth_; }

 private:
  KernelSpec() = default;
  KernelKind kind_ = KernelKind::Linear;
  int degree_ = 1;
  double offset_ = 0.0;
  double bandwidth_ = 1.0;
};

/// Kernel matrix k(a_i, b_j) for point sets stored one point per column.
Matrix gram(const KernelSpec& kernel, const Matrix& a_points,
            const Matrix& b_points);

/// Rank-k propagator fit carried out entirely in Gram coordinates. The
/// feature images of the data are never formed; every reported quantity is
/// a function of the three kernel matrices G_XX, G_YY, G_YX.
struct KernelSolution {
  /// q x k': column i holds coefficients c_i with left singular vector
  /// u_i = sum_j c_i[j] phi(y_j) of the projected target in feature space.
  Matrix coeff_projector;
  Vector z_sigma;  // singular values of the projected target, descending
  ComplexVector eigenvalues;  // of the compressed rank-k' propagator
  /// q x k': eigenfunction i evaluates as sum_j eigfn_coeffs(j, i) k(x_j, .).
  ComplexMatrix eigfn_coeffs;
  double achieved_error_sq = 0.0;  // squared Hilbert-Schmidt fit error
  int rank_x = 0;                  // numerical rank of G_XX
  int effective_rank = 0;          // k' = columns actually retained
};

/// Data-space rank-k fit: x_points / y_points are d x q paired samples.
/// Directions whose Gram eigenvalue falls below rank_rtol times the largest
/// are dropped, so effective_rank can be below k.
KernelSolution kernel_lowrank_solve(const KernelSpec& kernel,
                                    const Matrix& x_points,
                                    const Matrix& y_points, int k,
                                    const ToleranceConfig& tol = {});

/// Evaluates every eigenfunction at a new point via the kernel sections
/// k(x_j, .) anchored at the training inputs.
ComplexVector eigenfunction_eval(const KernelSolution& sol,
                                 const KernelSpec& kernel,
                                 const Matrix& x_points, const Vector& point);

}  // namespace lrmap
