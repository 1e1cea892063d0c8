#pragma once

#include "fpn/datagen.hpp"
#include "fpn/solver.hpp"

#include <span>
#include <vector>

namespace fpn {

/// |f_k - f_star| / |f_star| per entry; f_star must be nonzero.
std::vector<double> relative_error(std::span<const double> f_trace, double f_star);

/// Off-diagonal support comparison. Counts are over ordered pairs, so a
/// missed undirected edge contributes 2 to fn.
struct SupportReport {
  IndexSet true_support;
  IndexSet estimated_support;
  bool exact_match = false;
  long tp = 0;
  long fp = 0;
  long fn = 0;
};

SupportReport support_report(const Mat& x, const IndexSet& truth, double zero_threshold = 1e-8);

/// Newman modularity of a 0/1 adjacency matrix under the given node labels.
/// The sum runs over all ordered pairs including i = j (with A_ii = 0);
/// |E| is the undirected edge count. Throws on an edgeless graph.
double modularity(const Mat& adjacency, const std::vector<int>& labels);

/// Quantities controlling support recovery: the covariance row-l1 bound, the
/// inf-norm of the inverted support block of the Hessian at the truth, and
/// the incoherence norm over the off-support block. Dense construction,
/// guarded by max_dim.
struct TheoryDiagnostics {
  double K_Sigma = 0.0;
  double K_H = 0.0;
  double incoherence = 0.0;
  int max_degree = 0;  // row nonzeros of theta, diagonal included
};

TheoryDiagnostics theory_diagnostics(const GroundTruth& gt, const IndexSet& disconnect = {},
                                     int max_dim = 200);

enum class WeightMode { adaptive, c_matrix, zero };

WeightMode weight_mode_from_string(const std::string& s);
const char* to_string(WeightMode m);

struct RecoveryOptions {
  WeightMode mode = WeightMode::c_matrix;
  double sigma = 0.01;        // adaptive mode
  double weights_eps = 1e-3;  // adaptive mode
  double pilot_tol = 1e-4;    // adaptive mode
  double c0 = 1.0;            // c_matrix mode: constant off-diagonal C
  double zero_threshold = 1e-8;
  SolverConfig solver{};
  int threads = 1;
};

struct RecoveryRow {
  int n = 0;
  double n_over_logp = 0.0;
  double success_rate = 0.0;
};

/// For each sample size: generate a fresh graph + samples per seed, solve,
/// and score exact support recovery. A run counts as a success only when the
/// solver certifies optimality and the thresholded support matches exactly.
std::vector<RecoveryRow> recovery_sweep(const GraphSpec& spec, const RecoveryOptions& opt,
                                        std::span<const int> n_grid, int seeds);

}  // namespace fpn
