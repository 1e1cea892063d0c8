#pragma once

#include "fpn/problem.hpp"

#include <cmath>
#include <optional>
#include <vector>

namespace fpn {

/// Per-iteration split of the off-diagonal variables. Restricted entries are
/// pinned to zero for the step; everything else (diagonal included) is free.
struct VariablePartition {
  BoolMask restricted;  // symmetric, false on the diagonal

  /// Mask of the free set including the diagonal.
  BoolMask free_with_diag() const { return !restricted; }

  /// |free set| counted over ordered pairs, diagonal included. At the
  /// optimum this equals the number of nonzeros of the solution.
  long free_size() const {
    return static_cast<long>(restricted.size()) - restricted.count();
  }
};

/// Restricted set: off-diagonal entries in [-eps, 0] whose gradient pushes
/// them outward (grad < 0), plus every forced-zero pair.
VariablePartition identify_partition(const ProblemInstance& prob, const Mat& x, const Mat& grad,
                                     double eps);

/// Approximate Newton direction supported on the free set:
/// keep-free(X * keep-free(grad) * X). Two dense multiplies, O(p^3).
Mat newton_direction_free(const Mat& x, const Mat& grad, const VariablePartition& part);

/// Unpartitioned Newton direction X * grad * X (used by the divergence demo).
Mat full_newton_direction(const Mat& x, const Mat& grad);

struct TraceRow {
  int iter = 0;
  double objective = 0.0;
  double rel_error = std::numeric_limits<double>::quiet_NaN();  // NaN when no reference
  double kkt_residual = 0.0;
  double step_size = 0.0;
  int n_backtracks = 0;
  long free_set_size = 0;
  double elapsed_seconds = 0.0;
};

enum class SolveStatus { kkt_satisfied, max_iter, line_search_stalled };

const char* to_string(SolveStatus s);

struct SolveResult {
  Mat X_star;
  std::vector<TraceRow> trace;
  SolveStatus status = SolveStatus::max_iter;
  KKTReport kkt;
  int iterations = 0;
  /// Inner-loop iterations accumulated by the subproblem solver; zero for
  /// every other solver.
  long total_inner_iterations = 0;
};

struct LineSearchStep {
  Mat X_next;
  CholeskyFactor factor;
  double objective = 0.0;
  double gamma = 1.0;
  int n_backtracks = 0;
};


/// Backtracking step for the partitioned update. A candidate pins the
/// restricted entries to zero and projects the free entries of X - gamma*dir;
/// it is accepted once it is PD and satisfies
///   f(cand) <= f(X) - alpha*gamma*<grad, dir>_free - alpha*<grad, X>_restricted.
/// Returns nullopt when max_backtracks step reductions are exhausted.
std::optional<LineSearchStep> line_search(const ProblemInstance& prob, const Mat& x, double fx,
                                          const Mat& grad, const Mat& dir,
                                          const VariablePartition& part, const SolverConfig& cfg);

/// Default starting point diag(1/S_ii), or a validated user-supplied one
/// (must be symmetric, PD, feasible). Throws on an invalid X0.
Mat initial_point(const ProblemInstance& prob, const std::optional<Mat>& x0);

/// The projected Newton-like outer loop: gradient, partition, free-set
/// direction, safeguarded line search, restricted entries assigned zero.
/// Stops on the KKT certificate at cfg.kkt_tol or at max_iter. The recorded
/// objective values are non-increasing.
SolveResult fpn_solve(const ProblemInstance& prob, const SolverConfig& cfg = {},
                      const std::optional<Mat>& x0 = std::nullopt,
                      std::optional<double> reference_opt = std::nullopt);

}  // namespace fpn
