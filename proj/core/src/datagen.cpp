#include "fpn/datagen.hpp"

#include <cmath>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

namespace fpn {

Topology topology_from_string(const std::string& s) {
  if (s == "ba") return Topology::ba;
  if (s == "ring") return Topology::ring;
  if (s == "grid") return Topology::grid;
  throw std::invalid_argument("unknown topology: " + s);
}

const char* to_string(Topology t) {
  switch (t) {
    case Topology::ba: return "ba";
    case Topology::ring: return "ring";
    case Topology::grid: return "grid";
  }
  return "unknown";
}

void GraphSpec::validate() const {
  if (p < 2) throw std::invalid_argument("GraphSpec: p must be >= 2");
  switch (topology) {
    case Topology::ba:
      if (ba_degree < 1) throw std::invalid_argument("GraphSpec: ba degree must be >= 1");
      if (p < ba_degree + 1)
        throw std::invalid_argument("GraphSpec: p must exceed the ba seed size");
      break;
    case Topology::ring:
      if (p < 3) throw std::invalid_argument("GraphSpec: ring requires p >= 3");
      break;
    case Topology::grid: {
      const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(p))));
      if (side * side != p) throw std::invalid_argument("GraphSpec: grid requires p to be a perfect square");
      break;
    }
  }
  if (weights.kind == WeightDist::Kind::uniform && !(weights.lo < weights.hi))
    throw std::invalid_argument("GraphSpec: uniform weight range must have lo < hi");
  if (weights.kind == WeightDist::Kind::constant && !(weights.value > 0.0))
    throw std::invalid_argument("GraphSpec: constant weight must be positive");
}

namespace {

std::vector<std::pair<int, int>> ba_edges(int p, int r, std::mt19937_64& rng) {
  std::vector<std::pair<int, int>> edges;
  std::vector<int> endpoints;  // one entry per edge endpoint, so sampling is degree-proportional
  auto add_edge = [&](int a, int b) {
    edges.emplace_back(a, b);
    endpoints.push_back(a);
    endpoints.push_back(b);
  };
  for (int i = 0; i <= r; ++i)
    for (int j = i + 1; j <= r; ++j) add_edge(i, j);
  for (int v = r + 1; v < p; ++v) {
    std::set<int> targets;
    std::uniform_int_distribution<std::size_t> pick(0, endpoints.size() - 1);
    while (static_cast<int>(targets.size()) < r) {
      const int t = endpoints[pick(rng)];
      if (t == v || targets.count(t)) continue;
      targets.insert(t);
    }
    for (int t : targets) add_edge(v, t);
  }
  return edges;
}

std::vector<std::pair<int, int>> ring_edges(int p) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < p; ++i) edges.emplace_back(i, (i + 1) % p);
  return edges;
}

std::vector<std::pair<int, int>> grid_edges(int p) {
  const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(p))));
  std::vector<std::pair<int, int>> edges;
  for (int row = 0; row < side; ++row) {
    for (int col = 0; col < side; ++col) {
      const int v = row * side + col;
      if (col + 1 < side) edges.emplace_back(v, v + 1);
      if (row + 1 < side) edges.emplace_back(v, v + side);
    }
  }
  return edges;
}

}  // namespace

Mat gen_graph(const GraphSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  std::vector<std::pair<int, int>> edges;
  switch (spec.topology) {
    case Topology::ba: edges = ba_edges(spec.p, spec.ba_degree, rng); break;
    case Topology::ring: edges = ring_edges(spec.p); break;
    case Topology::grid: edges = grid_edges(spec.p); break;
  }
  Mat a = Mat::Zero(spec.p, spec.p);
  std::uniform_real_distribution<double> uni(spec.weights.lo, spec.weights.hi);
  for (const auto& [i, j] : edges) {
    const double w = spec.weights.kind == WeightDist::Kind::uniform ? uni(rng) : spec.weights.value;
    a(i, j) = w;
    a(j, i) = w;
  }
  return a;
}

GroundTruth gen_precision(const Mat& adjacency) {
  const auto p = adjacency.rows();
  if (adjacency.cols() != p) throw std::invalid_argument("gen_precision: adjacency must be square");
  if ((adjacency.array() < 0.0).any())
    throw std::invalid_argument("gen_precision: adjacency weights must be non-negative");
  if (adjacency.diagonal().cwiseAbs().maxCoeff() != 0.0)
    throw std::invalid_argument("gen_precision: adjacency must have zero diagonal");
  if ((adjacency - adjacency.transpose()).cwiseAbs().maxCoeff() != 0.0)
    throw std::invalid_argument("gen_precision: adjacency must be symmetric");
  const double lmax = largest_eigenvalue(adjacency);
  if (lmax <= 0.0) throw std::invalid_argument("gen_precision: adjacency has no edges");

  Mat theta_raw = -adjacency;
  theta_raw.diagonal().array() += 1.05 * lmax;
  auto factor = cholesky(theta_raw);
  if (!factor) throw std::runtime_error("gen_precision: shifted matrix is not positive definite");
  const Mat sigma_raw = inverse_spd(*factor);

  const Vec d = sigma_raw.diagonal().cwiseSqrt();
  GroundTruth gt;
  gt.adjacency = adjacency;
  gt.theta = symmetrized(d.asDiagonal() * theta_raw * d.asDiagonal());
  gt.sigma = symmetrized(d.cwiseInverse().asDiagonal() * sigma_raw * d.cwiseInverse().asDiagonal());
  gt.support = IndexSet::support_of(adjacency);
  return gt;
}

Dataset sample_gaussian(const GroundTruth& gt, int n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("sample_gaussian: n must be >= 2");
  auto factor = cholesky(gt.theta);
  if (!factor) throw std::invalid_argument("sample_gaussian: precision matrix is not positive definite");
  const auto p = gt.theta.rows();
  const Mat lt = factor->matrixL().transpose();

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Dataset ds;
  ds.n = n;
  ds.samples.resize(n, p);
  Vec z(p);
  for (int i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) z(j) = normal(rng);
    // y = L^{-T} z has covariance (L L^T)^{-1} = theta^{-1}.
    ds.samples.row(i) = lt.triangularView<Eigen::Upper>().solve(z).transpose();
  }
  ds.S = sample_covariance(ds.samples);
  return ds;
}

Eigen::MatrixXd log_returns(const Eigen::MatrixXd& prices) {
  if (prices.rows() < 2) throw std::invalid_argument("log_returns: need at least two rows of prices");
  if ((prices.array() <= 0.0).any())
    throw std::invalid_argument("log_returns: prices must be strictly positive");
  const Eigen::MatrixXd logp = prices.array().log();
  return logp.bottomRows(prices.rows() - 1) - logp.topRows(prices.rows() - 1);
}

Mat sample_covariance(const Eigen::MatrixXd& samples, bool center) {
  const auto n = samples.rows();
  if (n < 1) throw std::invalid_argument("sample_covariance: need at least one sample");
  Eigen::MatrixXd y = samples;
  if (center) y.rowwise() -= samples.colwise().mean();
  Mat s = symmetrized(y.transpose() * y / static_cast<double>(n));
  if ((s.diagonal().array() <= 0.0).any())
    throw std::invalid_argument(
        "sample_covariance: diagonal must be strictly positive; a column of the data is "
        "identically zero (or constant under centering)");
  return s;
}

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  // splitmix64 over the combined words
  std::uint64_t x = base ^ (0x9E3779B97F4A7C15ULL * (a + 1)) ^ (0xBF58476D1CE4E5B9ULL * (b + 1));
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace fpn
