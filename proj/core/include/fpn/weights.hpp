#pragma once

#include "fpn/solver.hpp"

namespace fpn {

/// Maximum likelihood pilot: the instance solved with zero weights to a
/// coarse tolerance (a rough pilot is enough for building weights). Returns
/// the final iterate even when the iteration cap is hit before the
/// certificate holds; throws only when the line search stalls outright.
Mat mle_pilot(const Mat& S, const IndexSet& disconnect = {}, double tol = 1e-4,
              int max_iter = 2000);

/// Re-weighted l1 weights lambda_ij = sigma / (|pilot_ij| + eps) off the
/// diagonal, zero on it.
Mat adaptive_weights(const Mat& pilot, double sigma, double eps = 1e-3);

/// Sample-size-scaled weights lambda = sqrt(log(p)/n) * C.
Mat weights_from_C(const Mat& c, long n, int p);

}  // namespace fpn
