#include "fpn/solver.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace fpn {

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::kkt_satisfied: return "kkt_satisfied";
    case SolveStatus::max_iter: return "max_iter";
    case SolveStatus::line_search_stalled: return "line_search_stalled";
  }
  return "unknown";
}

VariablePartition identify_partition(const ProblemInstance& prob, const Mat& x, const Mat& grad,
                                     double eps) {
  if (eps <= 0.0) throw std::invalid_argument("identify_partition: eps must be positive");
  const int p = prob.dim();
  BoolMask restricted = prob.forced_zero_mask();
  for (int j = 0; j < p; ++j) {
    for (int i = 0; i < p; ++i) {
      if (i == j) continue;
      if (x(i, j) >= -eps && x(i, j) <= 0.0 && grad(i, j) < 0.0) restricted(i, j) = true;
    }
  }
  return VariablePartition{std::move(restricted)};
}

Mat newton_direction_free(const Mat& x, const Mat& grad, const VariablePartition& part) {
  const BoolMask keep = part.free_with_diag();
  Mat dir = symmetrized(x * mask(grad, keep) * x);
  return mask(dir, keep);
}

Mat full_newton_direction(const Mat& x, const Mat& grad) { return symmetrized(x * grad * x); }

std::optional<LineSearchStep> line_search(const ProblemInstance& prob, const Mat& x, double fx,
                                          const Mat& grad, const Mat& dir,
                                          const VariablePartition& part, const SolverConfig& cfg) {
  const BoolMask& restricted = part.restricted;
  // dir vanishes on the restricted set, so the full elementwise sum equals
  // the inner product over the free set.
  const double decrease_free = (grad.array() * dir.array()).sum();
  const double decrease_restricted = (restricted.select(grad, 0.0).array() * x.array()).sum();

  // Sufficient decrease is tested up to the evaluation noise of f; the exact
  // inequality deadlocks once true per-step decreases sink below round-off.
  const double noise = objective_noise_bound(prob, x, fx);
  double gamma = 1.0;
  for (int t = 0; t <= cfg.max_backtracks; ++t, gamma *= cfg.beta) {
    Mat cand = project_omega(x - gamma * dir, prob.forced_zero_mask());
    cand = restricted.select(0.0, cand);
    auto factor = cholesky(cand);
    if (!factor) continue;
    const double fc = objective_from_factor(prob, cand, *factor);
    const double demanded = cfg.alpha * gamma * decrease_free + cfg.alpha * decrease_restricted;
    if (fc <= fx - demanded + noise) {
      return LineSearchStep{std::move(cand), std::move(*factor), fc, gamma, t};
    }
  }
  return std::nullopt;
}

Mat initial_point(const ProblemInstance& prob, const std::optional<Mat>& x0) {
  const int p = prob.dim();
  if (!x0) {
    Mat x = Mat::Zero(p, p);
    x.diagonal() = prob.S().diagonal().cwiseInverse();
    return x;
  }
  if (x0->rows() != p || x0->cols() != p)
    throw std::invalid_argument("initial point: dimension mismatch");
  const Mat sym = symmetrized(*x0);
  if ((sym - project_omega(sym, prob.forced_zero_mask())).cwiseAbs().maxCoeff() != 0.0)
    throw std::invalid_argument("initial point: must be feasible (non-positive off-diagonals, zero on the forced set)");
  if (!cholesky(sym)) throw std::invalid_argument("initial point: must be positive definite");
  return sym;
}

namespace {

double rel_error_of(double f, std::optional<double> f_star) {
  if (!f_star) return std::numeric_limits<double>::quiet_NaN();
  return std::abs(f - *f_star) / std::abs(*f_star);
}

}  // namespace

SolveResult fpn_solve(const ProblemInstance& prob, const SolverConfig& cfg,
                      const std::optional<Mat>& x0, std::optional<double> reference_opt) {
  cfg.validate();
  const auto t_start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  };

  SolveResult res;
  Mat x = initial_point(prob, x0);
  auto factor = cholesky(x);
  if (!factor) throw std::invalid_argument("fpn_solve: initial point is not positive definite");
  double fx = objective_from_factor(prob, x, *factor);
  // fx anchors the line search with the current measurement; the trace
  // records the running minimum, which is the same value up to evaluation
  // noise and keeps the recorded sequence monotone like the true one.
  double f_record = fx;

  double last_gamma = 0.0;
  int last_backtracks = 0;
  for (int k = 0; k < cfg.max_iter; ++k) {
    const Mat grad = gradient_from_factor(prob, *factor);
    res.kkt = kkt_check_with_gradient(prob, x, grad, cfg.kkt_tol, cfg.kkt_tol);
    VariablePartition part = identify_partition(prob, x, grad, cfg.epsilon_k);
    res.trace.push_back({k, f_record, rel_error_of(f_record, reference_opt), res.kkt.residual(),
                         last_gamma, last_backtracks, part.free_size(), elapsed()});
    res.iterations = k;
    if (res.kkt.satisfied) {
      res.status = SolveStatus::kkt_satisfied;
      res.X_star = std::move(x);
      return res;
    }

    const Mat dir = newton_direction_free(x, grad, part);
    auto step = line_search(prob, x, fx, grad, dir, part, cfg);
    if (!step) {
      res.status = SolveStatus::line_search_stalled;
      res.X_star = std::move(x);
      return res;
    }
    x = std::move(step->X_next);
    factor = std::move(step->factor);
    fx = step->objective;
    f_record = std::min(f_record, fx);
    last_gamma = step->gamma;
    last_backtracks = step->n_backtracks;
  }

  const Mat grad = gradient_from_factor(prob, *factor);
  res.kkt = kkt_check_with_gradient(prob, x, grad, cfg.kkt_tol, cfg.kkt_tol);
  res.trace.push_back({cfg.max_iter, f_record, rel_error_of(f_record, reference_opt),
                       res.kkt.residual(), last_gamma, last_backtracks,
                       identify_partition(prob, x, grad, cfg.epsilon_k).free_size(), elapsed()});
  res.iterations = cfg.max_iter;
  res.status = res.kkt.satisfied ? SolveStatus::kkt_satisfied : SolveStatus::max_iter;
  res.X_star = std::move(x);
  return res;
}

}  // namespace fpn
