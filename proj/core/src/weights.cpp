#include "fpn/weights.hpp"

#include <cmath>
#include <stdexcept>

namespace fpn {

Mat mle_pilot(const Mat& S, const IndexSet& disconnect, double tol, int max_iter) {
  ProblemInstance prob = ProblemInstance::without_weights(S, disconnect);
  SolverConfig cfg;
  cfg.kkt_tol = tol;
  cfg.max_iter = max_iter;
  SolveResult res = fpn_solve(prob, cfg);
  if (res.status == SolveStatus::line_search_stalled)
    throw std::runtime_error("mle_pilot: line search stalled; the MLE may not exist for this sample");
  return res.X_star;
}

Mat adaptive_weights(const Mat& pilot, double sigma, double eps) {
  if (pilot.rows() != pilot.cols()) throw std::invalid_argument("adaptive_weights: pilot must be square");
  if (sigma < 0.0) throw std::invalid_argument("adaptive_weights: sigma must be non-negative");
  if (!(eps > 0.0)) throw std::invalid_argument("adaptive_weights: eps must be positive");
  const Mat sym = symmetrized(pilot);
  Mat lambda = (sigma / (sym.array().abs() + eps)).matrix();
  lambda.diagonal().setZero();
  return lambda;
}

Mat weights_from_C(const Mat& c, long n, int p) {
  if (n < 2) throw std::invalid_argument("weights_from_C: n must be >= 2");
  if (c.rows() != p || c.cols() != p) throw std::invalid_argument("weights_from_C: C must be p x p");
  if ((c.array() < 0.0).any()) throw std::invalid_argument("weights_from_C: C must be non-negative");
  if (c.diagonal().cwiseAbs().maxCoeff() != 0.0)
    throw std::invalid_argument("weights_from_C: C must have zero diagonal");
  return std::sqrt(std::log(static_cast<double>(p)) / static_cast<double>(n)) * c;
}

}  // namespace fpn
