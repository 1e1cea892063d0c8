#include "fpn/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace fpn {

std::optional<CholeskyFactor> cholesky(const Mat& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("cholesky: matrix must be square");
  Eigen::LLT<Mat> llt(a);
  if (llt.info() != Eigen::Success) return std::nullopt;
  return CholeskyFactor(std::move(llt));
}

double logdet(const CholeskyFactor& f) {
  return 2.0 * f.llt().matrixLLT().diagonal().array().log().sum();
}

Mat inverse_spd(const CholeskyFactor& f) {
  const auto p = f.dim();
  Mat inv = f.llt().solve(Mat::Identity(p, p));
  return symmetrized(inv);
}

Mat project_omega(const Mat& a, const BoolMask& forced_zero) {
  Mat out = a.array().min(0.0).matrix();
  out.diagonal() = a.diagonal();
  out = forced_zero.select(0.0, out);
  return out;
}

Mat mask(const Mat& a, const BoolMask& keep) { return keep.select(a, 0.0); }

double largest_eigenvalue(const Mat& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("largest_eigenvalue: matrix must be square");
  const Eigen::Index p = a.rows();
  if (p <= 2000) {
    Eigen::SelfAdjointEigenSolver<Mat> es(a, Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
  }
  // Shifted power iteration: a + shift*I is entrywise dominated by its top
  // eigenpair once shifted past the spectrum's lower end.
  const double shift = a.cwiseAbs().rowwise().sum().maxCoeff();
  if (shift == 0.0) return 0.0;
  Vec v = Vec::Ones(p).normalized();
  double lambda = 0.0;
  for (int it = 0; it < 5000; ++it) {
    Vec w = a * v + shift * v;
    const double next = v.dot(w);
    v = w.normalized();
    if (std::abs(next - lambda) <= 1e-13 * shift && it > 2) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return lambda - shift;
}

}  // namespace fpn
