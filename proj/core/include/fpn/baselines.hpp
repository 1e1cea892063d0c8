#pragma once

#include "fpn/solver.hpp"

namespace fpn {

enum class BaselineKind { pgd, apgd, full_newton_demo, subproblem_exact };

/// Projected gradient descent X <- P(X - gamma * grad) with a projection-arc
/// Armijo backtracking line search. Trace objectives are non-increasing.
SolveResult pgd_solve(const ProblemInstance& prob, const SolverConfig& cfg = {},
                      const std::optional<Mat>& x0 = std::nullopt,
                      std::optional<double> reference_opt = std::nullopt);

/// Accelerated projected gradient with FISTA-style momentum and a
/// function-value restart. The extrapolated point retreats to the current
/// iterate whenever it leaves the PD cone, so every step is well defined.
/// Objectives may increase between restarts.
SolveResult apgd_solve(const ProblemInstance& prob, const SolverConfig& cfg = {},
                       const std::optional<Mat>& x0 = std::nullopt,
                       std::optional<double> reference_opt = std::nullopt);

/// Two-metric iterate with the unpartitioned Newton direction X*grad*X.
/// Kept as a demonstration: once sign constraints activate, no positive step
/// size decreases the objective and the run stalls. Stalling is reported via
/// the status, never thrown.
SolveResult full_newton_demo(const ProblemInstance& prob, const SolverConfig& cfg = {},
                             const std::optional<Mat>& x0 = std::nullopt,
                             std::optional<double> reference_opt = std::nullopt);

struct InnerConfig {
  int max_inner_iters = 200;
  double inner_tol = 1e-6;  // on the projected-gradient norm of the model
};

/// Outer loop that minimizes the Hessian-metric quadratic model over the
/// feasible set with an inner projected-gradient loop, then line-searches
/// along the arc toward the model minimizer. Hessian products are evaluated
/// as X^{-1} D X^{-1} without forming the p^2 x p^2 matrix.
SolveResult subproblem_exact_solve(const ProblemInstance& prob, const SolverConfig& cfg = {},
                                   const std::optional<Mat>& x0 = std::nullopt,
                                   const InnerConfig& inner = {},
                                   std::optional<double> reference_opt = std::nullopt);

}  // namespace fpn
