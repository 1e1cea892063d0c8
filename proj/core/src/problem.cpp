#include "fpn/problem.hpp"

#include <cmath>
#include <stdexcept>

namespace fpn {

void SolverConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("SolverConfig: alpha must be in (0,1)");
  if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("SolverConfig: beta must be in (0,1)");
  if (!(epsilon_k > 0.0)) throw std::invalid_argument("SolverConfig: epsilon_k must be positive");
  if (!(kkt_tol > 0.0)) throw std::invalid_argument("SolverConfig: kkt_tol must be positive");
  if (max_iter < 1) throw std::invalid_argument("SolverConfig: max_iter must be >= 1");
  if (max_backtracks < 1) throw std::invalid_argument("SolverConfig: max_backtracks must be >= 1");
}

namespace {

void check_symmetric(const Mat& a, const char* name) {
  if (a.rows() != a.cols()) throw std::invalid_argument(std::string(name) + " must be square");
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::invalid_argument(std::string(name) + " must be symmetric");
}

}  // namespace

ProblemInstance::ProblemInstance(Mat S, Mat lambda, IndexSet disconnect)
    : S_(std::move(S)), lambda_(std::move(lambda)), disconnect_(std::move(disconnect)) {
  check_symmetric(S_, "S");
  const int p = dim();
  if (p < 2) throw std::invalid_argument("ProblemInstance: dimension must be >= 2");
  if ((S_.diagonal().array() <= 0.0).any())
    throw std::invalid_argument(
        "ProblemInstance: sample covariance must have strictly positive diagonal elements");
  if (lambda_.size() == 0) lambda_ = Mat::Zero(p, p);
  check_symmetric(lambda_, "lambda");
  if (lambda_.rows() != p) throw std::invalid_argument("ProblemInstance: lambda dimension mismatch");
  if ((lambda_.array() < 0.0).any())
    throw std::invalid_argument("ProblemInstance: weights must be non-negative");
  if (lambda_.diagonal().cwiseAbs().maxCoeff() != 0.0)
    throw std::invalid_argument("ProblemInstance: weights must have zero diagonal");
  if (disconnect_.max_index() >= p)
    throw std::invalid_argument("ProblemInstance: disconnectivity pair out of range");
  G_ = S_ - lambda_;
  e_mask_ = disconnect_.to_mask(p);
}

ProblemInstance ProblemInstance::without_weights(Mat S, IndexSet disconnect) {
  const auto p = S.rows();
  return ProblemInstance(std::move(S), Mat::Zero(p, p), std::move(disconnect));
}

std::optional<double> objective_value(const ProblemInstance& prob, const Mat& x) {
  auto f = cholesky(x);
  if (!f) return std::nullopt;
  return objective_from_factor(prob, x, *f);
}

double objective_from_factor(const ProblemInstance& prob, const Mat& x, const CholeskyFactor& f) {
  return -logdet(f) + (x.array() * prob.G().array()).sum();
}

double objective_noise_bound(const ProblemInstance& prob, const Mat& x, double fx) {
  const double scale = 1.0 + std::abs(fx) + (x.array() * prob.G().array()).abs().sum();
  return 32.0 * std::numeric_limits<double>::epsilon() * scale;
}

std::optional<Mat> gradient(const ProblemInstance& prob, const Mat& x) {
  auto f = cholesky(x);
  if (!f) return std::nullopt;
  return gradient_from_factor(prob, *f);
}

Mat gradient_from_factor(const ProblemInstance& prob, const CholeskyFactor& f) {
  return symmetrized(prob.G() - inverse_spd(f));
}

KKTReport kkt_check(const ProblemInstance& prob, const Mat& x, double zero_threshold, double tol) {
  auto g = gradient(prob, x);
  if (!g) throw std::invalid_argument("kkt_check: point is not positive definite");
  return kkt_check_with_gradient(prob, x, *g, zero_threshold, tol);
}

KKTReport kkt_check_with_gradient(const ProblemInstance& prob, const Mat& x, const Mat& grad,
                                  double zero_threshold, double tol) {
  const int p = prob.dim();
  const BoolMask& forced = prob.forced_zero_mask();
  KKTReport rep;
  rep.zero_threshold = zero_threshold;
  rep.tol = tol;
  // The near-zero set is evaluated on off-diagonals only; diagonal entries of
  // a PD iterate are strictly positive and always count as support.
  for (int j = 0; j < p; ++j) {
    for (int i = 0; i < p; ++i) {
      const bool near_zero = i != j && std::abs(x(i, j)) <= zero_threshold;
      if (!near_zero) {
        rep.max_grad_on_support = std::max(rep.max_grad_on_support, std::abs(grad(i, j)));
      } else if (!forced(i, j)) {
        rep.max_positive_grad_on_zeroset = std::max(rep.max_positive_grad_on_zeroset, grad(i, j));
      }
      if (forced(i, j)) rep.max_abs_on_forced = std::max(rep.max_abs_on_forced, std::abs(x(i, j)));
    }
  }
  rep.max_positive_grad_on_zeroset = std::max(rep.max_positive_grad_on_zeroset, 0.0);
  rep.satisfied = rep.max_grad_on_support <= tol && rep.max_positive_grad_on_zeroset <= tol &&
                  rep.max_abs_on_forced <= zero_threshold;
  return rep;
}

}  // namespace fpn
