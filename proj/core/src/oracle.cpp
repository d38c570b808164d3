#include <lrmap/oracle.hpp>

#include <lrmap/digest.hpp>
#include <lrmap/errors.hpp>
#include <lrmap/linalg.hpp>
#include <lrmap/rng.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace lrmap {
namespace {

double p_key(SchattenP p) {
  return p.is_spectral() ? std::numeric_limits<double>::infinity() : p.value();
}

std::uint64_t instance_digest(const Matrix& x, const Matrix& y, int k) {
  return Digest().matrix(x).matrix(y).i64(k).value();
}

double candidate_error(const Matrix& x, const Matrix& y, const Matrix& m,
                       SchattenP p) {
  return schatten_norm(y - m * x, p);
}

// Zero-padded factor pair of the closed-form operator, k columns each, so
// perturbations explore the full rank budget.
void closed_form_factors(const LowRankSolution& sol, int k, Matrix& f1,
                         Matrix& f2) {
  const Eigen::Index n = sol.op.rows();
  f1 = Matrix::Zero(n, k);
  f2 = Matrix::Zero(n, k);
  const Eigen::Index kp = sol.range_basis.cols();
  f1.leftCols(kp) = sol.range_basis;
  f2.leftCols(kp) = sol.op.transpose() * sol.range_basis;
}

Matrix scaled_perturbation(Rng& rng, const Matrix& base, double radius) {
  Matrix noise = rng.gaussian_matrix(base.rows(), base.cols());
  const double norm = noise.norm();
  if (norm == 0.0) return Matrix::Zero(base.rows(), base.cols());
  return noise * (radius * base.norm() / norm);
}

}  // namespace

OracleReport random_rank_k_search(const Matrix& x, const Matrix& y, int k,
                                  SchattenP p, int n_samples,
                                  std::uint64_t seed,
                                  const ToleranceConfig& tol) {
  if (n_samples < 1) {
    throw std::invalid_argument("need at least one candidate sample");
  }
  const LowRankSolution sol = solve_lowrank(x, y, k, p, tol);

  OracleReport rep;
  rep.closed_form_error = sol.achieved_error;
  rep.rng_seed = seed;
  rep.instance_digest = instance_digest(x, y, k);
  rep.per_p_formula_gap[p_key(p)] =
      std::abs(sol.achieved_error - sol.predicted_error);

  Rng rng(seed);
  const Eigen::Index n = y.rows();
  double best = std::numeric_limits<double>::infinity();
  for (int s = 0; s < n_samples; ++s) {
    const Matrix a = rng.gaussian_matrix(n, k);
    const Matrix b = rng.gaussian_matrix(n, k);
    best = std::min(best, candidate_error(x, y, a * b.transpose(), p));
    ++rep.n_candidates;
  }

  Matrix f1, f2;
  closed_form_factors(sol, k, f1, f2);
  const int n_pert = (n_samples + 9) / 10;
  for (double radius : {1e-3, 1e-2, 1e-1}) {
    for (int s = 0; s < n_pert; ++s) {
      const Matrix a = f1 + scaled_perturbation(rng, f1, radius);
      const Matrix b = f2 + scaled_perturbation(rng, f2, radius);
      best = std::min(best, candidate_error(x, y, a * b.transpose(), p));
      ++rep.n_candidates;
    }
  }

  rep.best_candidate_error = best;
  rep.margin = best - rep.closed_form_error;
  return rep;
}

AlsResult als_refine(const Matrix& x, const Matrix& y, int k,
                     const Matrix& m_init, int max_iters,
                     const ToleranceConfig& tol) {
  if (k < 1) {
    throw std::invalid_argument("alternating refinement needs k >= 1");
  }
  if (m_init.rows() != y.rows() || m_init.cols() != x.rows()) {
    throw DimensionMismatch("initial operator has the wrong shape");
  }
  if (max_iters < 0) {
    throw std::invalid_argument("max_iters must be nonnegative");
  }
  const Eigen::Index n = y.rows();

  // Balanced factor split of the initial operator.
  SvdFactors f = svd(m_init);
  Matrix a = Matrix::Zero(n, k);
  Matrix b = Matrix::Zero(n, k);
  const Eigen::Index kk = std::min<Eigen::Index>(k, f.sigma.size());
  for (Eigen::Index i = 0; i < kk; ++i) {
    const double root = std::sqrt(f.sigma(i));
    a.col(i) = f.u.col(i) * root;
    b.col(i) = f.vt.row(i).transpose() * root;
  }

  const Matrix x_pinv = pinv(x, tol);
  const Matrix unconstrained = y * x_pinv;  // fixed target of the B-step

  AlsResult res;
  res.op = a * b.transpose();
  res.error = (y - res.op * x).norm();
  double prev = res.error;
  for (int it = 0; it < max_iters; ++it) {
    // A-step: exact least squares for A given B.
    const Matrix s = b.transpose() * x;  // k x q
    if (rank_from_sigma(svd(s).sigma, tol) < std::min<int>(k, s.cols())) {
      res.pinv_fallback = true;
    }
    a = y * pinv(s, tol);

    // B-step: exact least squares for B given A.
    if (rank_from_sigma(svd(a).sigma, tol) < std::min<int>(k, a.rows())) {
      res.pinv_fallback = true;
    }
    b = (pinv(a, tol) * unconstrained).transpose();

    res.op = a * b.transpose();
    res.error = (y - res.op * x).norm();
    res.iterations = it + 1;
    if (std::abs(prev - res.error) <= 1e-12 * (1.0 + res.error)) break;
    prev = res.error;
  }
  return res;
}

TruncationReference eckart_young_reference(
    const Matrix& y, int k, const std::vector<SchattenP>& p_list) {
  if (k < 0) {
    throw std::invalid_argument("rank budget k must be nonnegative");
  }
  SvdFactors f = svd(y);
  const Eigen::Index kk = std::min<Eigen::Index>(k, f.sigma.size());
  TruncationReference ref;
  ref.truncated = f.u.leftCols(kk) * f.sigma.head(kk).asDiagonal() *
                  f.vt.topRows(kk);
  const Vector tail = f.sigma.segment(kk, f.sigma.size() - kk);
  for (SchattenP p : p_list) {
    ref.tail_error[p_key(p)] = detail::p_combine(tail, p);
  }
  return ref;
}

OracleReport consistency_report(const Matrix& x, const Matrix& y, int k,
                                const std::vector<SchattenP>& p_list,
                                std::uint64_t seed,
                                const ToleranceConfig& tol) {
  if (p_list.empty()) {
    throw std::invalid_argument("need at least one norm to check");
  }
  OracleReport rep;
  rep.rng_seed = seed;
  rep.instance_digest = instance_digest(x, y, k);
  bool first = true;
  for (SchattenP p : p_list) {
    const LowRankSolution sol = solve_lowrank(x, y, k, p, tol);
    rep.per_p_formula_gap[p_key(p)] =
        std::abs(sol.achieved_error - sol.predicted_error);
    if (first) {
      rep.closed_form_error = sol.achieved_error;
      rep.best_candidate_error = sol.achieved_error;
      first = false;
    }
  }

  // Split identity: the residual decomposes orthogonally across the row
  // space of X and its complement, exactly at p = 2.
  const Matrix row_proj = pinv(x, tol) * x;
  const Matrix outside = y - y * row_proj;  // fixed part, independent of M
  Rng rng(seed);
  for (int s = 0; s < 10; ++s) {
    const Matrix m = rng.gaussian_matrix(y.rows(), y.rows());
    const Matrix resid = y - m * x;
    const double lhs = resid.squaredNorm();
    const double rhs = (resid * row_proj).squaredNorm() + outside.squaredNorm();
    const double dev = std::abs(lhs - rhs) / (1.0 + lhs);
    rep.pythagoras_max_rel_dev = std::max(rep.pythagoras_max_rel_dev, dev);
  }
  return rep;
}

OracleReport verify_optimality(const Matrix& x, const Matrix& y, int k,
                               SchattenP p, int n_samples, int n_als_starts,
                               std::uint64_t seed, const ToleranceConfig& tol) {
  OracleReport rep = random_rank_k_search(x, y, k, p, n_samples, seed, tol);
  const bool frobenius = !p.is_spectral() && p.value() == 2.0;
  if (!frobenius || k < 1 || n_als_starts < 1) {
    return rep;
  }

  Rng rng(Digest().u64(seed).bytes("als", 3).value());
  const Eigen::Index n = y.rows();
  for (int s = 0; s < n_als_starts; ++s) {
    const Matrix a = rng.gaussian_matrix(n, k);
    const Matrix b = rng.gaussian_matrix(n, k);
    const AlsResult als = als_refine(x, y, k, a * b.transpose(), 200, tol);
    const double err = candidate_error(x, y, als.op, p);
    rep.best_candidate_error = std::min(rep.best_candidate_error, err);
    ++rep.n_refinements;
  }
  rep.margin = rep.best_candidate_error - rep.closed_form_error;
  return rep;
}

ProjectorVariantGap alt_projector_gap(const Matrix& x, const Matrix& y, int k,
                                      SchattenP p, const ToleranceConfig& tol) {
  const LowRankSolution sol = solve_lowrank(x, y, k, p, tol);

  SvdFactors fx = svd(x);
  const Eigen::Index kk = std::min<Eigen::Index>(k, fx.sigma.size());
  const Matrix v_k = fx.vt.topRows(kk).transpose();       // q x kk
  const Matrix image = y * v_k;                           // n x kk
  const Matrix basis = principal_range_basis(image, k, tol);
  const Matrix variant = basis * (basis.transpose() * (y * pinv(x, tol)));

  ProjectorVariantGap gap;
  gap.op_gap = (variant - sol.op).norm() / (1.0 + sol.op.norm());
  gap.error_gap = schatten_norm(y - variant * x, p) - sol.achieved_error;
  return gap;
}

}  // namespace lrmap
