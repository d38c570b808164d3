#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace lrmap {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Numerical thresholds shared across the library.
///
/// rank_rtol is relative to the largest singular value (a singular value
/// counts as zero when sigma <= rank_rtol * sigma_max). psd_atol bounds how
/// negative an eigenvalue of a nominally PSD matrix may be before it is
/// rejected rather than clipped. recon_rtol is the relative tolerance used
/// by reconstruction checks.
struct ToleranceConfig {
  double rank_rtol = 1e-12;
  double psd_atol = 1e-10;
  double recon_rtol = 1e-12;
};

/// Order of a Schatten norm, p in (0, inf]. p=1 is the trace/nuclear norm,
/// p=2 the Hilbert-Schmidt/Frobenius norm, p=inf the spectral (2-induced)
/// norm. Values in (0,1) give a quasi-norm and are accepted but flagged.
class SchattenP {
 public:
  SchattenP() : p_(2.0) {}
  explicit SchattenP(double p) : p_(p) {
    if (std::isnan(p) || p <= 0.0) {
      throw std::invalid_argument("SchattenP: order must be > 0");
    }
  }

  static SchattenP trace() { return SchattenP(1.0); }
  static SchattenP hilbert_schmidt() { return SchattenP(2.0); }
  static SchattenP spectral() {
    return SchattenP(std::numeric_limits<double>::infinity());
  }

  double value() const { return p_; }
  bool is_spectral() const { return std::isinf(p_); }
  bool is_quasi_norm() const { return p_ < 1.0; }

  friend bool operator==(const SchattenP& a, const SchattenP& b) {
    return a.p_ == b.p_;
  }

 private:
  double p_;
};

}  // namespace lrmap
