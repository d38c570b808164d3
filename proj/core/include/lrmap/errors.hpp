#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lrmap {

/// Operand shapes are incompatible for the requested operation.
struct DimensionMismatch : std::invalid_argument {
  explicit DimensionMismatch(const std::string& what)
      : std::invalid_argument(what) {}
};

/// The iterative factorization backing an operation failed to converge.
struct NonConvergence : std::runtime_error {
  explicit NonConvergence(const std::string& what) : std::runtime_error(what) {}
};

/// A weight operator has an eigenvalue below the allowed clipping bound.
struct NotPsd : std::runtime_error {
  explicit NotPsd(const std::string& what) : std::runtime_error(what) {}
};

/// A matrix required to be symmetric is not, beyond tolerance.
struct NotSymmetric : std::runtime_error {
  explicit NotSymmetric(const std::string& what) : std::runtime_error(what) {}
};

/// A snapshot series is too short to form state/advanced-state pairs.
struct TooFewSnapshots : std::invalid_argument {
  explicit TooFewSnapshots(const std::string& what)
      : std::invalid_argument(what) {}
};

/// A Hilbert-Schmidt kernel returned a non-finite value at a quadrature node.
struct KernelEvalFailure : std::runtime_error {
  explicit KernelEvalFailure(const std::string& what)
      : std::runtime_error(what) {}
};

/// Grid refinement hit the node budget before the stopping test was met.
/// Carries the (node count, error) trace accumulated so far.
struct NotConverged : std::runtime_error {
  NotConverged(const std::string& what,
               std::vector<std::pair<int, double>> trace_in)
      : std::runtime_error(what), trace(std::move(trace_in)) {}
  std::vector<std::pair<int, double>> trace;
};

}  // namespace lrmap
