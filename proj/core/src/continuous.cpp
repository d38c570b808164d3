#include <lrmap/continuous.hpp>

#include <lrmap/errors.hpp>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>
#include <string>

namespace lrmap {
namespace {

void check_interval(int q, double a, double b, int q_min) {
  if (q < q_min) {
    throw std::invalid_argument("node count must be >= " +
                                std::to_string(q_min));
  }
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
    throw std::invalid_argument("interval endpoints must be finite with a < b");
  }
}

}  // namespace

QuadratureRule gauss_legendre(int q, double a, double b) {
  check_interval(q, a, b, 1);
  // Jacobi matrix of the Legendre three-term recurrence; its eigenvalues are
  // the nodes on [-1, 1] and the squared first eigenvector components give
  // the weights (total mass 2).
  Matrix jacobi = Matrix::Zero(q, q);
  for (int i = 1; i < q; ++i) {
    const double beta =
        static_cast<double>(i) / std::sqrt(4.0 * i * i - 1.0);
    jacobi(i - 1, i) = beta;
    jacobi(i, i - 1) = beta;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(jacobi);
  if (es.info() != Eigen::Success) {
    throw NonConvergence("Legendre node eigenproblem failed");
  }

  QuadratureRule rule;
  rule.nodes = Matrix(1, q);
  rule.weights = Vector(q);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  for (int i = 0; i < q; ++i) {
    rule.nodes(0, i) = mid + half * es.eigenvalues()(i);
    const double first = es.eigenvectors()(0, i);
    rule.weights(i) = 2.0 * first * first * half;
  }
  rule.description = "gauss-legendre q=" + std::to_string(q) + " on [" +
                     std::to_string(a) + "," + std::to_string(b) + "]";
  return rule;
}

QuadratureRule composite_trapezoid(int q, double a, double b) {
  check_interval(q, a, b, 2);
  QuadratureRule rule;
  rule.nodes = Matrix(1, q);
  rule.weights = Vector(q);
  const double h = (b - a) / (q - 1);
  for (int i = 0; i < q; ++i) {
    rule.nodes(0, i) = a + h * i;
    rule.weights(i) = (i == 0 || i == q - 1) ? 0.5 * h : h;
  }
  rule.description = "trapezoid q=" + std::to_string(q) + " on [" +
                     std::to_string(a) + "," + std::to_string(b) + "]";
  return rule;
}

QuadratureRule tensor_product(const std::vector<QuadratureRule>& factors) {
  if (factors.empty()) {
    throw std::invalid_argument("tensor product needs at least one factor");
  }
  int dim = 0;
  int count = 1;
  for (const auto& f : factors) {
    dim += f.dim();
    count *= f.size();
  }
  if (dim > 3) {
    throw std::invalid_argument("tensor rules support boxes up to dimension 3");
  }

  QuadratureRule rule;
  rule.nodes = Matrix(dim, count);
  rule.weights = Vector::Ones(count);
  for (int j = 0; j < count; ++j) {
    int rest = j;
    int row = 0;
    double w = 1.0;
    for (const auto& f : factors) {  // first factor runs fastest
      const int i = rest % f.size();
      rest /= f.size();
      rule.nodes.block(row, j, f.dim(), 1) = f.nodes.col(i);
      w *= f.weights(i);
      row += f.dim();
    }
    rule.weights(j) = w;
  }
  rule.description = "tensor(";
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (i > 0) rule.description += " x ";
    rule.description += factors[i].description;
  }
  rule.description += ")";
  return rule;
}

Matrix discretize_hs(const HsKernel& kernel, const QuadratureRule& rule) {
  if (kernel.output_dim <= 0 || !kernel.eval) {
    throw std::invalid_argument("kernel must have a positive output dimension "
                                "and an evaluator");
  }
  Matrix out(kernel.output_dim, rule.size());
  for (int j = 0; j < rule.size(); ++j) {
    const Vector col = kernel.eval(rule.nodes.col(j));
    if (col.size() != kernel.output_dim) {
      throw DimensionMismatch("kernel evaluation returned " +
                              std::to_string(col.size()) +
                              " components, declared " +
                              std::to_string(kernel.output_dim));
    }
    if (!col.allFinite()) {
      throw KernelEvalFailure("kernel evaluation produced non-finite values");
    }
    out.col(j) = std::sqrt(rule.weights(j)) * col;
  }
  return out;
}

LowRankSolution continuous_lowrank(const HsKernel& kx, const HsKernel& ky,
                                   const QuadratureRule& rule, int k,
                                   SchattenP p, const ToleranceConfig& tol) {
  return solve_lowrank(discretize_hs(kx, rule), discretize_hs(ky, rule), k, p,
                       tol);
}

RefinementResult refine_to_convergence(const HsKernel& kx, const HsKernel& ky,
                                       int k, SchattenP p,
                                       const RuleFamily& family, int q_start,
                                       int q_max, double conv_rtol,
                                       const ToleranceConfig& tol) {
  if (q_start < 1 || q_max < q_start) {
    throw std::invalid_argument("need 1 <= q_start <= q_max");
  }
  if (!(conv_rtol > 0.0)) {
    throw std::invalid_argument("conv_rtol must be positive");
  }

  RefinementResult res;
  int q = q_start;
  res.solution = continuous_lowrank(kx, ky, family(q), k, p, tol);
  res.trace.emplace_back(q, res.solution.achieved_error);
  while (true) {
    const int q_next = 2 * q;
    if (q_next > q_max) {
      throw NotConverged("error did not settle before the node budget " +
                             std::to_string(q_max),
                         res.trace);
    }
    LowRankSolution next = continuous_lowrank(kx, ky, family(q_next), k, p, tol);
    res.trace.emplace_back(q_next, next.achieved_error);
    const double prev_err = res.solution.achieved_error;
    res.solution = std::move(next);
    q = q_next;
    if (std::abs(prev_err - res.solution.achieved_error) <=
        conv_rtol * (1.0 + res.solution.achieved_error)) {
      return res;
    }
  }
}

}  // namespace lrmap
