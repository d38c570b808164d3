#include <lrmap/dmd.hpp>

#include <lrmap/errors.hpp>
#include <lrmap/linalg.hpp>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
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

}  // namespace

std::pair<Matrix, Matrix> snapshot_pairs(const SnapshotSeries& series) {
  if (series.count() < 2) {
    throw TooFewSnapshots("need at least 2 snapshots to form a shifted pair, got " +
                          std::to_string(series.count()));
  }
  const Eigen::Index t = series.states.cols();
  return {series.states.leftCols(t - 1), series.states.rightCols(t - 1)};
}

Matrix unconstrained_dmd(const Matrix& x, const Matrix& y,
                         const ToleranceConfig& tol) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) {
    throw DimensionMismatch("shifted pair shapes disagree");
  }
  return y * pinv(x, tol);
}

LowRankSolution lowrank_dmd(const SnapshotSeries& series, int k, SchattenP p,
                            const ToleranceConfig& tol) {
  auto [x, y] = snapshot_pairs(series);
  return solve_lowrank(x, y, k, p, tol);
}

SpectralSummary dmd_modes(const LowRankSolution& sol, const Matrix& x,
                          const Matrix& y, const ToleranceConfig& tol) {
  if (sol.range_basis.rows() != y.rows()) {
    throw DimensionMismatch("range basis does not match snapshot dimension");
  }
  SpectralSummary out;
  const Eigen::Index kp = sol.range_basis.cols();
  if (kp == 0) {
    out.eigenvalues = ComplexVector(0);
    out.modes = ComplexMatrix(y.rows(), 0);
    out.residuals = Vector(0);
    return out;
  }

  const Matrix& q = sol.range_basis;
  const Matrix compressed = q.transpose() * (y * pinv(x, tol)) * q;
  Eigen::EigenSolver<Matrix> es(compressed);
  if (es.info() != Eigen::Success) {
    throw NonConvergence("eigenvalue iteration failed on compressed propagator");
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(kp));
  std::iota(order.begin(), order.end(), 0);
  const ComplexVector raw = es.eigenvalues();
  std::stable_sort(order.begin(), order.end(),
                   [&raw](Eigen::Index a, Eigen::Index b) {
                     return spectral_before(raw(a), raw(b));
                   });

  out.eigenvalues = ComplexVector(kp);
  out.modes = ComplexMatrix(y.rows(), kp);
  out.residuals = Vector(kp);
  const ComplexMatrix op_c = sol.op.cast<std::complex<double>>();
  for (Eigen::Index i = 0; i < kp; ++i) {
    out.eigenvalues(i) = raw(order[i]);
    ComplexVector mode = q * es.eigenvectors().col(order[i]);
    const double norm = mode.norm();
    if (norm > 0.0) mode /= norm;
    out.modes.col(i) = mode;
    out.residuals(i) = (op_c * mode - out.eigenvalues(i) * mode).norm();
  }
  return out;
}

}  // namespace lrmap
