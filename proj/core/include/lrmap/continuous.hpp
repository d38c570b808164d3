#pragma once

#include <lrmap/solver.hpp>
#include <lrmap/types.hpp>

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace lrmap {

/// Vector-valued kernel column u -> k(., u) of a Hilbert-Schmidt operator
/// whose output space is coordinatized by output_dim components.
struct HsKernel {
  int output_dim = 0;
  std::function<Vector(const Vector&)> eval;
};

/// Quadrature nodes (one column per node) and positive weights on a box
/// domain. Weights sum to the domain measure.
struct QuadratureRule {
  Matrix nodes;    // dim x Q
  Vector weights;  // Q
  std::string description;

  int dim() const { return static_cast<int>(nodes.rows()); }
  int size() const { return static_cast<int>(nodes.cols()); }
};

/// Gauss-Legendre rule with q nodes on [a, b], exact for polynomials of
/// degree <= 2q - 1. Nodes and weights come from the symmetric tridiagonal
/// eigenproblem of the Legendre recurrence.
QuadratureRule gauss_legendre(int q, double a, double b);

/// Composite trapezoid rule with q >= 2 equally spaced nodes on [a, b].
QuadratureRule composite_trapezoid(int q, double a, double b);

/// Product rule on the box formed by the factors. Supports up to total
/// dimension 3; node j runs fastest over the first factor.
QuadratureRule tensor_product(const std::vector<QuadratureRule>& factors);

/// Square-root quadrature discretization: column j is sqrt(w_j) k(., u_j),
/// so Euclidean inner products of columns approximate the L2 pairing.
Matrix discretize_hs(const HsKernel& kernel, const QuadratureRule& rule);

/// Rank-k fit between two Hilbert-Schmidt operators given by their kernels,
/// computed on the discretized pair.
LowRankSolution continuous_lowrank(const HsKernel& kx, const HsKernel& ky,
                                   const QuadratureRule& rule, int k,
                                   SchattenP p,
                                   const ToleranceConfig& tol = {});

/// Family of rules indexed by the per-axis node count.
using RuleFamily = std::function<QuadratureRule(int)>;

struct RefinementResult {
  LowRankSolution solution;                    // at the finest rule used
  std::vector<std::pair<int, double>> trace;   // (q, achieved_error)
};

/// Doubles the node count from q_start until the achieved error settles,
/// |e(2q) - e(q)| <= conv_rtol * (1 + e(2q)), returning the finest solution
/// and the full (q, error) trace. Throws NotConverged carrying the trace if
/// the doubling would pass q_max first.
RefinementResult refine_to_convergence(const HsKernel& kx, const HsKernel& ky,
                                       int k, SchattenP p,
                                       const RuleFamily& family, int q_start,
                                       int q_max, double conv_rtol,
                                       const ToleranceConfig& tol = {});

}  // namespace lrmap
