#pragma once

#include <lrmap/solver.hpp>
#include <lrmap/types.hpp>

#include <utility>

namespace lrmap {

/// Time-ordered sequence of state snapshots, one column per time step.
struct SnapshotSeries {
  Matrix states;  // n x T

  int state_dim() const { return static_cast<int>(states.rows()); }
  int count() const { return static_cast<int>(states.cols()); }
};

/// Splits T snapshots into the shifted pair (X, Y) with X = columns 0..T-2
/// and Y = columns 1..T-1. Throws TooFewSnapshots for T < 2.
std::pair<Matrix, Matrix> snapshot_pairs(const SnapshotSeries& series);

/// Least-squares propagator Y X^+ without a rank constraint.
Matrix unconstrained_dmd(const Matrix& x, const Matrix& y,
                         const ToleranceConfig& tol = {});

/// Rank-k propagator fit for a snapshot series: solve_lowrank on the
/// shifted pair.
LowRankSolution lowrank_dmd(const SnapshotSeries& series, int k, SchattenP p,
                            const ToleranceConfig& tol = {});

/// Spectral content of a rank-k propagator.
struct SpectralSummary {
  ComplexVector eigenvalues;  // sorted by |.| desc, then Re desc, then Im desc
  ComplexMatrix modes;        // n x k', unit 2-norm columns
  Vector residuals;           // ||op * mode_i - lambda_i * mode_i||_2
};

/// Eigen-decomposition of the propagator compressed to its range basis,
/// q^T (Y X^+) q, lifted back through q. Defective or clustered spectra are
/// reported through the residual column, never rejected.
SpectralSummary dmd_modes(const LowRankSolution& sol, const Matrix& x,
                          const Matrix& y, const ToleranceConfig& tol = {});

}  // namespace lrmap
