#pragma once

#include "fpn/index_set.hpp"
#include "fpn/linalg.hpp"

#include <cstdint>
#include <string>

namespace fpn {

/// Name of the generator behind every randomized routine, recorded in run
/// metadata so results can be replicated.
inline constexpr const char* kRngName = "mt19937_64";

enum class Topology { ba, ring, grid };

Topology topology_from_string(const std::string& s);
const char* to_string(Topology t);

struct WeightDist {
  enum class Kind { uniform, constant };
  Kind kind = Kind::uniform;
  double lo = 2.0;
  double hi = 5.0;
  double value = 1.0;

  static WeightDist uniform_range(double lo, double hi) {
    return {Kind::uniform, lo, hi, 0.0};
  }
  static WeightDist constant(double c) { return {Kind::constant, 0.0, 0.0, c}; }
};

struct GraphSpec {
  Topology topology = Topology::ba;
  int p = 0;
  int ba_degree = 1;  // edges attached per new node
  WeightDist weights{};
  std::uint64_t seed = 0;

  void validate() const;
};

struct GroundTruth {
  Mat adjacency;   // non-negative weights, zero diagonal
  Mat theta;       // true precision, PD with non-positive off-diagonals
  Mat sigma;       // theta^{-1}, unit diagonal
  IndexSet support;  // off-diagonal support of theta
};

struct Dataset {
  Eigen::MatrixXd samples;  // n x p, one observation per row
  int n = 0;
  Mat S;  // (1/n) Y^T Y
};

/// Weighted adjacency matrix for the requested topology; deterministic in
/// the seed. The preferential-attachment graph seeds a clique on
/// ba_degree + 1 nodes and then attaches ba_degree distinct edges per new
/// node with degree-proportional probabilities, giving exactly
/// r(r+1)/2 + (p-r-1)r edges.
Mat gen_graph(const GraphSpec& spec);

/// Precision matrix from a weighted adjacency: theta~ = 1.05*lmax(A)*I - A,
/// rescaled symmetrically so the covariance has unit diagonal.
GroundTruth gen_precision(const Mat& adjacency);

/// n zero-mean Gaussian samples with precision gt.theta; y = L^{-T} z with
/// theta = L L^T. Deterministic in the seed.
Dataset sample_gaussian(const GroundTruth& gt, int n, std::uint64_t seed);

/// Row-difference log returns of a strictly positive price table.
Eigen::MatrixXd log_returns(const Eigen::MatrixXd& prices);

/// Uncentered second-moment matrix (1/n) Y^T Y; optional centering for
/// ingested real data. Rejects any non-positive diagonal entry.
Mat sample_covariance(const Eigen::MatrixXd& samples, bool center = false);

/// Deterministic per-task seed derivation for sweeps.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0);

}  // namespace fpn
