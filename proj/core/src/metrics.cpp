#include "fpn/metrics.hpp"

#include "fpn/weights.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace fpn {

std::vector<double> relative_error(std::span<const double> f_trace, double f_star) {
  if (f_star == 0.0) throw std::invalid_argument("relative_error: reference value must be nonzero");
  std::vector<double> out;
  out.reserve(f_trace.size());
  for (double f : f_trace) out.push_back(std::abs(f - f_star) / std::abs(f_star));
  return out;
}

SupportReport support_report(const Mat& x, const IndexSet& truth, double zero_threshold) {
  SupportReport rep;
  rep.true_support = truth;
  rep.estimated_support = IndexSet::support_of(x, zero_threshold);
  for (const auto& [i, j] : rep.estimated_support.pairs())
    (truth.contains(i, j) ? rep.tp : rep.fp) += 2;
  for (const auto& [i, j] : truth.pairs())
    if (!rep.estimated_support.contains(i, j)) rep.fn += 2;
  rep.exact_match = rep.fp == 0 && rep.fn == 0;
  return rep;
}

double modularity(const Mat& adjacency, const std::vector<int>& labels) {
  const auto p = adjacency.rows();
  if (adjacency.cols() != p) throw std::invalid_argument("modularity: adjacency must be square");
  if (static_cast<Eigen::Index>(labels.size()) != p)
    throw std::invalid_argument("modularity: one label per node required");
  if ((adjacency - adjacency.transpose()).cwiseAbs().maxCoeff() != 0.0)
    throw std::invalid_argument("modularity: adjacency must be symmetric");
  if (((adjacency.array() != 0.0) && (adjacency.array() != 1.0)).any())
    throw std::invalid_argument("modularity: adjacency must be 0/1");
  if (adjacency.diagonal().cwiseAbs().maxCoeff() != 0.0)
    throw std::invalid_argument("modularity: adjacency must have zero diagonal");

  const Vec degree = adjacency.rowwise().sum();
  const double two_e = degree.sum();
  if (two_e <= 0.0) throw std::invalid_argument("modularity: graph has no edges");

  double q = 0.0;
  for (Eigen::Index i = 0; i < p; ++i)
    for (Eigen::Index j = 0; j < p; ++j)
      if (labels[i] == labels[j]) q += adjacency(i, j) - degree(i) * degree(j) / two_e;
  return q / two_e;
}

namespace {

// Ordered index pairs of the support (diagonal included) and of the
// complement, in a fixed traversal order.
std::vector<std::pair<int, int>> ordered_support(const Mat& theta) {
  std::vector<std::pair<int, int>> s;
  const int p = static_cast<int>(theta.rows());
  for (int j = 0; j < p; ++j)
    for (int i = 0; i < p; ++i)
      if (i == j || theta(i, j) != 0.0) s.emplace_back(i, j);
  return s;
}

}  // namespace

TheoryDiagnostics theory_diagnostics(const GroundTruth& gt, const IndexSet& disconnect,
                                     int max_dim) {
  const int p = static_cast<int>(gt.theta.rows());
  if (p > max_dim)
    throw std::invalid_argument("theory_diagnostics: dimension exceeds the dense-block guard (" +
                                std::to_string(max_dim) + ")");
  const Mat& sigma = gt.sigma;
  TheoryDiagnostics diag;
  diag.K_Sigma = sigma.cwiseAbs().rowwise().sum().maxCoeff();
  for (int i = 0; i < p; ++i) {
    int nnz = 0;
    for (int j = 0; j < p; ++j)
      if (i == j || gt.theta(i, j) != 0.0) ++nnz;
    diag.max_degree = std::max(diag.max_degree, nnz);
  }

  const auto s_pairs = ordered_support(gt.theta);
  const auto ns = static_cast<Eigen::Index>(s_pairs.size());
  // H = sigma (x) sigma restricted to rows/columns in the support:
  // H[(i1,j1),(i2,j2)] = sigma(i1,i2) * sigma(j1,j2).
  Mat h_ss(ns, ns);
  for (Eigen::Index a = 0; a < ns; ++a)
    for (Eigen::Index b = 0; b < ns; ++b)
      h_ss(a, b) = sigma(s_pairs[a].first, s_pairs[b].first) *
                   sigma(s_pairs[a].second, s_pairs[b].second);
  auto factor = cholesky(symmetrized(h_ss));
  if (!factor) throw std::runtime_error("theory_diagnostics: support block of the Hessian is singular");
  const Mat h_ss_inv = inverse_spd(*factor);
  diag.K_H = h_ss_inv.cwiseAbs().rowwise().sum().maxCoeff();

  // Incoherence over S' = zero off-diagonal pairs minus the forced set,
  // row blocks so the |S'| x |S| slab never materializes whole.
  double inco = 0.0;
  Eigen::RowVectorXd row(ns);
  for (int j = 0; j < p; ++j) {
    for (int i = 0; i < p; ++i) {
      if (i == j || gt.theta(i, j) != 0.0 || disconnect.contains(i, j)) continue;
      for (Eigen::Index b = 0; b < ns; ++b)
        row(b) = sigma(i, s_pairs[b].first) * sigma(j, s_pairs[b].second);
      inco = std::max(inco, (row * h_ss_inv).cwiseAbs().sum());
    }
  }
  diag.incoherence = inco;
  return diag;
}

WeightMode weight_mode_from_string(const std::string& s) {
  if (s == "adaptive") return WeightMode::adaptive;
  if (s == "C-matrix" || s == "c-matrix") return WeightMode::c_matrix;
  if (s == "zero") return WeightMode::zero;
  throw std::invalid_argument("unknown weight mode: " + s);
}

const char* to_string(WeightMode m) {
  switch (m) {
    case WeightMode::adaptive: return "adaptive";
    case WeightMode::c_matrix: return "C-matrix";
    case WeightMode::zero: return "zero";
  }
  return "unknown";
}

namespace {

bool recovery_run(const GraphSpec& base, const RecoveryOptions& opt, int n, std::uint64_t seed) {
  GraphSpec spec = base;
  spec.seed = mix_seed(base.seed, static_cast<std::uint64_t>(n), seed);
  const GroundTruth gt = gen_precision(gen_graph(spec));
  const Dataset ds = sample_gaussian(gt, n, mix_seed(spec.seed, 0x5eedULL));

  Mat lambda;
  try {
    switch (opt.mode) {
      case WeightMode::zero: lambda = Mat::Zero(spec.p, spec.p); break;
      case WeightMode::adaptive:
        lambda = adaptive_weights(mle_pilot(ds.S, {}, opt.pilot_tol), opt.sigma, opt.weights_eps);
        break;
      case WeightMode::c_matrix: {
        Mat c = Mat::Constant(spec.p, spec.p, opt.c0);
        c.diagonal().setZero();
        lambda = weights_from_C(c, n, spec.p);
        break;
      }
    }
    const SolveResult res = fpn_solve(ProblemInstance(ds.S, lambda), opt.solver);
    if (res.status != SolveStatus::kkt_satisfied) return false;
    return support_report(res.X_star, gt.support, opt.zero_threshold).exact_match;
  } catch (const std::exception&) {
    return false;  // pilot failure or stalls count as unrecovered
  }
}

}  // namespace

std::vector<RecoveryRow> recovery_sweep(const GraphSpec& spec, const RecoveryOptions& opt,
                                        std::span<const int> n_grid, int seeds) {
  spec.validate();
  if (seeds < 1) throw std::invalid_argument("recovery_sweep: seeds must be >= 1");
  struct Task {
    int n_index;
    int n;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (std::size_t ni = 0; ni < n_grid.size(); ++ni)
    for (int r = 0; r < seeds; ++r)
      tasks.push_back({static_cast<int>(ni), n_grid[ni], static_cast<std::uint64_t>(r)});

  std::vector<std::atomic<int>> successes(n_grid.size());
  for (auto& s : successes) s.store(0);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= tasks.size()) break;
      const Task& t = tasks[idx];
      if (recovery_run(spec, opt, t.n, t.seed)) successes[t.n_index].fetch_add(1);
    }
  };
  const int n_threads = std::max(1, std::min<int>(opt.threads, static_cast<int>(tasks.size())));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::vector<RecoveryRow> rows;
  const double logp = std::log(static_cast<double>(spec.p));
  for (std::size_t ni = 0; ni < n_grid.size(); ++ni) {
    rows.push_back({n_grid[ni], static_cast<double>(n_grid[ni]) / logp,
                    static_cast<double>(successes[ni].load()) / seeds});
  }
  return rows;
}

}  // namespace fpn
