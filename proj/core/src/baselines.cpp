#include "fpn/baselines.hpp"

#include <chrono>
#include <cmath>

namespace fpn {

namespace {

double rel_error_of(double f, std::optional<double> f_star) {
  if (!f_star) return std::numeric_limits<double>::quiet_NaN();
  return std::abs(f - *f_star) / std::abs(*f_star);
}

long full_size(int p) { return static_cast<long>(p) * p; }

struct Stopwatch {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

struct ArcStep {
  Mat X_next;
  CholeskyFactor factor;
  double objective;
  double gamma;
  int n_backtracks;
};

// Projection-arc Armijo: candidate P(base - gamma*grad) accepted once PD and
// f(cand) <= f(base) - alpha * <grad, base - cand>, evaluated with the same
// sub-noise allowance as the partitioned line search.
std::optional<ArcStep> projection_arc_search(const ProblemInstance& prob, const Mat& base,
                                             double f_base, const Mat& grad, double gamma0,
                                             const SolverConfig& cfg) {
  const double noise = objective_noise_bound(prob, base, f_base);
  double gamma = gamma0;
  for (int t = 0; t <= cfg.max_backtracks; ++t, gamma *= cfg.beta) {
    Mat cand = project_omega(base - gamma * grad, prob.forced_zero_mask());
    auto factor = cholesky(cand);
    if (!factor) continue;
    const double fc = objective_from_factor(prob, cand, *factor);
    const double demanded = cfg.alpha * (grad.array() * (base - cand).array()).sum();
    if (fc <= f_base - demanded + noise)
      return ArcStep{std::move(cand), std::move(*factor), fc, gamma, t};
  }
  return std::nullopt;
}

}  // namespace

SolveResult pgd_solve(const ProblemInstance& prob, const SolverConfig& cfg,
                      const std::optional<Mat>& x0, std::optional<double> reference_opt) {
  cfg.validate();
  Stopwatch clock;
  SolveResult res;
  const int p = prob.dim();

  Mat x = initial_point(prob, x0);
  auto factor = cholesky(x);
  if (!factor) throw std::invalid_argument("pgd_solve: initial point is not positive definite");
  double fx = objective_from_factor(prob, x, *factor);
  double f_record = fx;  // running minimum for the trace; fx anchors Armijo

  double gamma_prev = 1.0;
  double last_gamma = 0.0;
  int last_backtracks = 0;
  for (int k = 0; k < cfg.max_iter; ++k) {
    const Mat grad = gradient_from_factor(prob, *factor);
    res.kkt = kkt_check_with_gradient(prob, x, grad, cfg.kkt_tol, cfg.kkt_tol);
    res.trace.push_back({k, f_record, rel_error_of(f_record, reference_opt), res.kkt.residual(),
                         last_gamma, last_backtracks, full_size(p), clock.seconds()});
    res.iterations = k;
    if (res.kkt.satisfied) {
      res.status = SolveStatus::kkt_satisfied;
      res.X_star = std::move(x);
      return res;
    }
    // Warm-started trial step: one beta above the last accepted size.
    const double gamma0 = std::min(1.0, gamma_prev / cfg.beta);
    auto step = projection_arc_search(prob, x, fx, grad, gamma0, cfg);
    if (!step) {
      res.status = SolveStatus::line_search_stalled;
      res.X_star = std::move(x);
      return res;
    }
    x = std::move(step->X_next);
    factor = std::move(step->factor);
    fx = step->objective;
    f_record = std::min(f_record, fx);
    gamma_prev = last_gamma = step->gamma;
    last_backtracks = step->n_backtracks;
  }
  const Mat grad = gradient_from_factor(prob, *factor);
  res.kkt = kkt_check_with_gradient(prob, x, grad, cfg.kkt_tol, cfg.kkt_tol);
  res.trace.push_back({cfg.max_iter, f_record, rel_error_of(f_record, reference_opt),
                       res.kkt.residual(), last_gamma, last_backtracks, full_size(p),
                       clock.seconds()});
  res.iterations = cfg.max_iter;
  res.status = res.kkt.satisfied ? SolveStatus::kkt_satisfied : SolveStatus::max_iter;
  res.X_star = std::move(x);
  return res;
}

SolveResult apgd_solve(const ProblemInstance& prob, const SolverConfig& cfg,
                       const std::optional<Mat>& x0, std::optional<double> reference_opt) {
  cfg.validate();
  Stopwatch clock;
  SolveResult res;
  const int p = prob.dim();

  Mat x = initial_point(prob, x0);
  auto factor = cholesky(x);
  if (!factor) throw std::invalid_argument("apgd_solve: initial point is not positive definite");
  double fx = objective_from_factor(prob, x, *factor);

  Mat x_prev = x;
  double t_momentum = 1.0;
  double gamma_prev = 1.0;
  double last_gamma = 0.0;
  int last_backtracks = 0;

  for (int k = 0; k < cfg.max_iter; ++k) {
    const Mat grad = gradient_from_factor(prob, *factor);
    res.kkt = kkt_check_with_gradient(prob, x, grad, cfg.kkt_tol, cfg.kkt_tol);
    res.trace.push_back({k, fx, rel_error_of(fx, reference_opt), res.kkt.residual(), last_gamma,
                         last_backtracks, full_size(p), clock.seconds()});
    res.iterations = k;
    if (res.kkt.satisfied) {
      res.status = SolveStatus::kkt_satisfied;
      res.X_star = std::move(x);
      return res;
    }

    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t_momentum * t_momentum));
    Mat z = project_omega(x + ((t_momentum - 1.0) / t_next) * (x - x_prev),
                          prob.forced_zero_mask());
    auto z_factor = cholesky(z);
    double fz;
    Mat gz;
    if (z_factor) {
      fz = objective_from_factor(prob, z, *z_factor);
      gz = gradient_from_factor(prob, *z_factor);
    } else {
      // Extrapolation left the PD cone: fall back to a plain gradient step.
      z = x;
      fz = fx;
      gz = grad;
      t_momentum = 1.0;
    }

    const double gamma0 = std::min(1.0, gamma_prev / cfg.beta);
    auto step = projection_arc_search(prob, z, fz, gz, gamma0, cfg);
    if (!step) {
      res.status = SolveStatus::line_search_stalled;
      res.X_star = std::move(x);
      return res;
    }
    const double f_prev = fx;
    x_prev = std::move(x);
    x = std::move(step->X_next);
    factor = std::move(step->factor);
    fx = step->objective;
    gamma_prev = last_gamma = step->gamma;
    last_backtracks = step->n_backtracks;
    t_momentum = fx > f_prev ? 1.0 : t_next;  // function-value restart
  }

  const Mat grad = gradient_from_factor(prob, *factor);
  res.kkt = kkt_check_with_gradient(prob, x, grad, cfg.kkt_tol, cfg.kkt_tol);
  res.trace.push_back({cfg.max_iter, fx, rel_error_of(fx, reference_opt), res.kkt.residual(),
                       last_gamma, last_backtracks, full_size(p), clock.seconds()});
  res.iterations = cfg.max_iter;
  res.status = res.kkt.satisfied ? SolveStatus::kkt_satisfied : SolveStatus::max_iter;
  res.X_star = std::move(x);
  return res;
}

SolveResult full_newton_demo(const ProblemInstance& prob, const SolverConfig& cfg,
                             const std::optional<Mat>& x0, std::optional<double> reference_opt) {
  cfg.validate();
  Stopwatch clock;
  SolveResult res;
  const int p = prob.dim();

  Mat x = initial_point(prob, x0);
  auto factor = cholesky(x);
  if (!factor)
    throw std::invalid_argument("full_newton_demo: initial point is not positive definite");
  double fx = objective_from_factor(prob, x, *factor);

  double last_gamma = 0.0;
  int last_backtracks = 0;
  for (int k = 0; k < cfg.max_iter; ++k) {
    const Mat grad = gradient_from_factor(prob, *factor);
    res.kkt = kkt_check_with_gradient(prob, x, grad, cfg.kkt_tol, cfg.kkt_tol);
    res.trace.push_back({k, fx, rel_error_of(fx, reference_opt), res.kkt.residual(), last_gamma,
                         last_backtracks, full_size(p), clock.seconds()});
    res.iterations = k;
    if (res.kkt.satisfied) {
      res.status = SolveStatus::kkt_satisfied;
      res.X_star = std::move(x);
      return res;
    }

    const Mat dir = full_newton_direction(x, grad);
    // Step accepted on plain decrease; the expected outcome on constrained
    // instances is that no positive step size decreases f and the run stalls.
    bool accepted = false;
    double gamma = 1.0;
    for (int t = 0; t <= cfg.max_backtracks; ++t, gamma *= cfg.beta) {
      Mat cand = project_omega(x - gamma * dir, prob.forced_zero_mask());
      auto cand_factor = cholesky(cand);
      if (!cand_factor) continue;
      const double fc = objective_from_factor(prob, cand, *cand_factor);
      if (fc < fx) {
        x = std::move(cand);
        factor = std::move(cand_factor);
        fx = fc;
        last_gamma = gamma;
        last_backtracks = t;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      res.status = SolveStatus::line_search_stalled;
      res.X_star = std::move(x);
      return res;
    }
  }
  const Mat grad = gradient_from_factor(prob, *factor);
  res.kkt = kkt_check_with_gradient(prob, x, grad, cfg.kkt_tol, cfg.kkt_tol);
  res.trace.push_back({cfg.max_iter, fx, rel_error_of(fx, reference_opt), res.kkt.residual(),
                       last_gamma, last_backtracks, full_size(p), clock.seconds()});
  res.iterations = cfg.max_iter;
  res.status = res.kkt.satisfied ? SolveStatus::kkt_satisfied : SolveStatus::max_iter;
  res.X_star = std::move(x);
  return res;
}

namespace {

// Largest eigenvalue of an SPD matrix by power iteration (deterministic
// start, Rayleigh-quotient stop).
double spd_largest_eigenvalue(const Mat& w) {
  Vec v = Vec::Ones(w.rows()).normalized();
  double lambda = 0.0;
  for (int it = 0; it < 300; ++it) {
    Vec u = w * v;
    const double next = v.dot(u);
    const double norm = u.norm();
    if (norm == 0.0) return 0.0;
    v = u / norm;
    if (it > 2 && std::abs(next - lambda) <= 1e-10 * std::abs(next)) return next;
    lambda = next;
  }
  return lambda;
}

}  // namespace

SolveResult subproblem_exact_solve(const ProblemInstance& prob, const SolverConfig& cfg,
                                   const std::optional<Mat>& x0, const InnerConfig& inner,
                                   std::optional<double> reference_opt) {
  cfg.validate();
  Stopwatch clock;
  SolveResult res;
  const int p = prob.dim();

  Mat x = initial_point(prob, x0);
  auto factor = cholesky(x);
  if (!factor)
    throw std::invalid_argument("subproblem_exact_solve: initial point is not positive definite");
  double fx = objective_from_factor(prob, x, *factor);
  double f_record = fx;

  double last_gamma = 0.0;
  int last_backtracks = 0;
  for (int k = 0; k < cfg.max_iter; ++k) {
    const Mat w = inverse_spd(*factor);  // X^{-1}
    const Mat grad = symmetrized(prob.G() - w);
    res.kkt = kkt_check_with_gradient(prob, x, grad, cfg.kkt_tol, cfg.kkt_tol);
    res.trace.push_back({k, f_record, rel_error_of(f_record, reference_opt), res.kkt.residual(),
                         last_gamma, last_backtracks, full_size(p), clock.seconds()});
    res.iterations = k;
    if (res.kkt.satisfied) {
      res.status = SolveStatus::kkt_satisfied;
      res.X_star = std::move(x);
      return res;
    }

    // Quadratic model m(Y) = <grad, Y-X> + 1/2 <Y-X, X^{-1}(Y-X)X^{-1}>,
    // minimized over the feasible set by projected gradient with the fixed
    // step 1/lambda_max(H), H = X^{-1} (.) X^{-1}.
    const double hess_lmax = std::pow(spd_largest_eigenvalue(w), 2);
    const double step = 0.95 / hess_lmax;
    auto model_grad = [&](const Mat& y) { return symmetrized(grad + w * (y - x) * w); };

    Mat y = project_omega(x - step * grad, prob.forced_zero_mask());
    for (int t = 0; t < inner.max_inner_iters; ++t) {
      const Mat gm = model_grad(y);
      Mat y_next = project_omega(y - step * gm, prob.forced_zero_mask());
      const double pg_norm = (y - y_next).norm() / step;
      y = std::move(y_next);
      ++res.total_inner_iterations;
      if (pg_norm <= inner.inner_tol) break;
    }

    // Safeguarded arc toward the model minimizer; the segment stays feasible
    // because the feasible set is convex.
    const Mat delta = y - x;
    const double slope = (grad.array() * delta.array()).sum();
    bool accepted = false;
    double gamma = 1.0;
    const double noise = objective_noise_bound(prob, x, fx);
    for (int t = 0; t <= cfg.max_backtracks; ++t, gamma *= cfg.beta) {
      Mat cand = x + gamma * delta;
      auto cand_factor = cholesky(cand);
      if (!cand_factor) continue;
      const double fc = objective_from_factor(prob, cand, *cand_factor);
      const double demanded = -cfg.alpha * gamma * slope;
      if (fc <= fx - demanded + noise) {
        x = std::move(cand);
        factor = std::move(cand_factor);
        fx = fc;
        f_record = std::min(f_record, fc);
        last_gamma = gamma;
        last_backtracks = t;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      res.status = SolveStatus::line_search_stalled;
      res.X_star = std::move(x);
      return res;
    }
  }
  const Mat grad = gradient_from_factor(prob, *factor);
  res.kkt = kkt_check_with_gradient(prob, x, grad, cfg.kkt_tol, cfg.kkt_tol);
  res.trace.push_back({cfg.max_iter, f_record, rel_error_of(f_record, reference_opt),
                       res.kkt.residual(), last_gamma, last_backtracks, full_size(p),
                       clock.seconds()});
  res.iterations = cfg.max_iter;
  res.status = res.kkt.satisfied ? SolveStatus::kkt_satisfied : SolveStatus::max_iter;
  res.X_star = std::move(x);
  return res;
}

}  // namespace fpn
