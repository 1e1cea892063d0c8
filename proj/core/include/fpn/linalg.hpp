#pragma once

#include <Eigen/Dense>

#include <optional>

namespace fpn {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using BoolMask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

/// (A + A^T)/2. Applied after every multiply/inverse so that symmetry is
/// exact and not merely up to round-off drift.
inline Mat symmetrized(const Mat& a) { return 0.5 * (a + a.transpose()); }

/// Lower-triangular Cholesky factor L with L L^T = A.
class CholeskyFactor {
 public:
  explicit CholeskyFactor(Eigen::LLT<Mat> llt) : llt_(std::move(llt)) {}

  Eigen::Index dim() const { return llt_.matrixLLT().rows(); }
  Mat matrixL() const { return llt_.matrixL(); }
  const Eigen::LLT<Mat>& llt() const { return llt_; }

 private:
  Eigen::LLT<Mat> llt_;
};

/// Factor a symmetric matrix. Returns nullopt when a non-positive pivot is
/// hit, i.e. the matrix is not positive definite. Callers in line searches
/// treat that as a normal control signal, not an error.
std::optional<CholeskyFactor> cholesky(const Mat& a);

/// log det(A) = 2 * sum_i log L_ii.
double logdet(const CholeskyFactor& f);

/// A^{-1} from the factor, symmetrized.
Mat inverse_spd(const CholeskyFactor& f);

/// Projection onto the sign-constraint set: entries on the forced-zero mask
/// become 0, diagonal passes through, remaining off-diagonals are clamped to
/// min(a_ij, 0). Idempotent.
Mat project_omega(const Mat& a, const BoolMask& forced_zero);

/// Keep entries where `keep` is true, zero elsewhere.
Mat mask(const Mat& a, const BoolMask& keep);

/// Largest eigenvalue of a symmetric matrix. Direct solve for small
/// dimensions, shift-and-power iteration for large ones.
double largest_eigenvalue(const Mat& a);

}  // namespace fpn
