#pragma once

#include "fpn/index_set.hpp"
#include "fpn/linalg.hpp"

#include <optional>

namespace fpn {

enum class InitPolicy { inverse_diagonal, user_supplied };

/// Knobs shared by all solvers. The line-search pair (alpha, beta) must lie
/// strictly inside (0, 1).
struct SolverConfig {
  double alpha = 0.05;
  double beta = 0.5;
  double epsilon_k = 1e-15;
  double kkt_tol = 1e-8;
  int max_iter = 2000;
  int max_backtracks = 64;
  InitPolicy init_policy = InitPolicy::inverse_diagonal;

  void validate() const;
};

/// Numerical optimality certificate. `satisfied` holds iff
///   - the gradient vanishes (to `tol`) on entries with |x_ij| above the
///     zero threshold, diagonal included,
///   - the gradient is <= tol on near-zero entries outside the forced set,
///   - x is zero (to `zero_threshold`) on the forced set.
struct KKTReport {
  double max_grad_on_support = 0.0;
  double max_positive_grad_on_zeroset = 0.0;
  double max_abs_on_forced = 0.0;
  double zero_threshold = 1e-8;
  double tol = 1e-8;
  bool satisfied = false;

  double residual() const {
    return std::max({max_grad_on_support, max_positive_grad_on_zeroset, max_abs_on_forced});
  }
};

/// The estimation instance: sample covariance S, non-negative weight matrix
/// lambda (zero diagonal) and the forced-zero pair set E. The objective is
///   f(X) = -log det X + tr(X (S - lambda)),
/// which agrees with the weighted-l1 objective on the feasible cone where
/// off-diagonals are non-positive. G = S - lambda is cached.
class ProblemInstance {
 public:
  ProblemInstance(Mat S, Mat lambda, IndexSet disconnect = {});

  /// lambda = 0 instance (pure MLE).
  static ProblemInstance without_weights(Mat S, IndexSet disconnect = {});

  int dim() const { return static_cast<int>(S_.rows()); }
  const Mat& S() const { return S_; }
  const Mat& lambda() const { return lambda_; }
  const Mat& G() const { return G_; }
  const IndexSet& disconnect() const { return disconnect_; }
  const BoolMask& forced_zero_mask() const { return e_mask_; }

 private:
  Mat S_;
  Mat lambda_;
  Mat G_;
  IndexSet disconnect_;
  BoolMask e_mask_;
};

/// f(X); nullopt when X is not positive definite.
std::optional<double> objective_value(const ProblemInstance& prob, const Mat& x);

/// f(X) given an existing factor of X.
double objective_from_factor(const ProblemInstance& prob, const Mat& x, const CholeskyFactor& f);

/// Bound on the round-off in evaluating f at x: a few tens of ulps of the
/// magnitude actually summed (log-determinant plus trace terms). Line
/// searches treat objective differences below this as unmeasurable.
double objective_noise_bound(const ProblemInstance& prob, const Mat& x, double fx);

/// grad f(X) = -X^{-1} + G, symmetrized; nullopt when X is not PD.
std::optional<Mat> gradient(const ProblemInstance& prob, const Mat& x);

/// grad f from an existing factor of X.
Mat gradient_from_factor(const ProblemInstance& prob, const CholeskyFactor& f);

KKTReport kkt_check(const ProblemInstance& prob, const Mat& x, double zero_threshold = 1e-8,
                    double tol = 1e-8);

/// Same certificate with the gradient already in hand.
KKTReport kkt_check_with_gradient(const ProblemInstance& prob, const Mat& x, const Mat& grad,
                                  double zero_threshold = 1e-8, double tol = 1e-8);

}  // namespace fpn
