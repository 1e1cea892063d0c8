#include "fpn/metrics.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <array>
#include <random>

using namespace fpn;

TEST_SUITE_BEGIN("metrics");

TEST_CASE("relative error arithmetic") {
  const std::array<double, 1> same{-3.0};
  CHECK(relative_error(same, -3.0)[0] == 0.0);

  const std::array<double, 1> twice{-6.0};
  CHECK(relative_error(twice, -3.0)[0] == doctest::Approx(1.0));

  const std::array<double, 3> trace{-2.0, -2.9, -2.99};
  const auto rel = relative_error(trace, -3.0);
  CHECK(rel[0] == doctest::Approx(1.0 / 3.0));
  CHECK(rel[1] == doctest::Approx(1.0 / 30.0));
  CHECK(rel[2] == doctest::Approx(1.0 / 300.0));

  CHECK_THROWS_AS(relative_error(trace, 0.0), std::invalid_argument);
}

TEST_CASE("support comparison counts ordered pairs") {
  Mat x = Mat::Identity(3, 3);
  x(0, 1) = x(1, 0) = -1e-12;  // below threshold
  auto rep = support_report(x, IndexSet{});
  CHECK(rep.exact_match);
  CHECK(rep.fp == 0);

  IndexSet truth;
  truth.insert(0, 1);
  truth.insert(1, 2);
  Mat theta = Mat::Identity(3, 3);
  theta(0, 1) = theta(1, 0) = -0.4;
  theta(1, 2) = theta(2, 1) = -0.3;
  rep = support_report(theta, truth);
  CHECK(rep.exact_match);
  CHECK(rep.tp == 4);

  theta(1, 2) = theta(2, 1) = 0.0;  // one true edge missing
  rep = support_report(theta, truth);
  CHECK_FALSE(rep.exact_match);
  CHECK(rep.fn == 2);
  CHECK(rep.tp == 2);
}

TEST_CASE("modularity of two disjoint edges") {
  Mat a = Mat::Zero(4, 4);
  a(0, 1) = a(1, 0) = 1.0;
  a(2, 3) = a(3, 2) = 1.0;
  CHECK(modularity(a, {1, 1, 2, 2}) == doctest::Approx(0.5));
  CHECK(std::abs(modularity(a, {7, 7, 7, 7})) < 1e-12);

  // All labels distinct: only the i == j terms survive, giving
  // -(sum d_i^2)/(2|E|)^2.
  double expected = 0.0;
  const Vec deg = a.rowwise().sum();
  for (int i = 0; i < 4; ++i) expected -= deg(i) * deg(i);
  expected /= 16.0;
  CHECK(modularity(a, {0, 1, 2, 3}) == doctest::Approx(expected));
  CHECK(modularity(a, {0, 1, 2, 3}) <= 0.0);
}

TEST_CASE("modularity input validation") {
  CHECK_THROWS_AS(modularity(Mat::Zero(3, 3), {0, 1, 2}), std::invalid_argument);
  Mat weighted = Mat::Zero(2, 2);
  weighted(0, 1) = weighted(1, 0) = 0.5;
  CHECK_THROWS_AS(modularity(weighted, {0, 0}), std::invalid_argument);
  Mat loop = Mat::Zero(2, 2);
  loop(0, 0) = 1.0;
  CHECK_THROWS_AS(modularity(loop, {0, 0}), std::invalid_argument);
}

TEST_CASE("modularity stays within [-1, 1] over exhaustive labelings") {
  std::mt19937_64 rng(15);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    const int p = 4 + static_cast<int>(rng() % 3);
    Mat a = Mat::Zero(p, p);
    for (int i = 0; i < p; ++i)
      for (int j = i + 1; j < p; ++j)
        if (u(rng) < 0.5) a(i, j) = a(j, i) = 1.0;
    if (a.sum() == 0.0) continue;
    std::vector<int> labels(p, 0);
    const long count = static_cast<long>(std::pow(2.0, p));
    for (long code = 0; code < count; ++code) {
      for (int v = 0; v < p; ++v) labels[v] = (code >> v) & 1;
      const double q = modularity(a, labels);
      CHECK(q >= -1.0 - 1e-12);
      CHECK(q <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("theory diagnostics of the identity precision") {
  GroundTruth gt;
  gt.theta = Mat::Identity(2, 2);
  gt.sigma = Mat::Identity(2, 2);
  const auto diag = theory_diagnostics(gt);
  CHECK(diag.K_Sigma == doctest::Approx(1.0));
  CHECK(diag.K_H == doctest::Approx(1.0));
  CHECK(diag.incoherence == doctest::Approx(0.0));
  CHECK(diag.max_degree == 1);
}

TEST_CASE("theory diagnostics match the dense Kronecker oracle") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 8; ++trial) {
    const int p = 3 + static_cast<int>(rng() % 3);
    GroundTruth gt;
    gt.theta = oracles::random_feasible_mmatrix(p, rng);
    gt.sigma = gt.theta.inverse();
    const auto diag = theory_diagnostics(gt);

    // Independent route: assemble the whole p^2 x p^2 Hessian and slice it.
    const Mat h = oracles::kron(gt.sigma, gt.sigma);
    std::vector<Eigen::Index> s_pos, sp_pos;
    for (int j = 0; j < p; ++j)
      for (int i = 0; i < p; ++i) {
        if (i == j || gt.theta(i, j) != 0.0) s_pos.push_back(oracles::vec_pos(i, j, p));
        else sp_pos.push_back(oracles::vec_pos(i, j, p));
      }
    Mat h_ss(s_pos.size(), s_pos.size());
    for (std::size_t a = 0; a < s_pos.size(); ++a)
      for (std::size_t b = 0; b < s_pos.size(); ++b) h_ss(a, b) = h(s_pos[a], s_pos[b]);
    const Mat h_ss_inv = h_ss.inverse();
    const double k_h = h_ss_inv.cwiseAbs().rowwise().sum().maxCoeff();
    CHECK(diag.K_H == doctest::Approx(k_h).epsilon(1e-10));
    CHECK(diag.K_Sigma ==
          doctest::Approx(gt.sigma.cwiseAbs().rowwise().sum().maxCoeff()).epsilon(1e-12));

    double inco = 0.0;
    if (!sp_pos.empty()) {
      Mat h_sps(sp_pos.size(), s_pos.size());
      for (std::size_t a = 0; a < sp_pos.size(); ++a)
        for (std::size_t b = 0; b < s_pos.size(); ++b) h_sps(a, b) = h(sp_pos[a], s_pos[b]);
      inco = (h_sps * h_ss_inv).cwiseAbs().rowwise().sum().maxCoeff();
    }
    CHECK(diag.incoherence == doctest::Approx(inco).epsilon(1e-9));

    // K_H is at least the reciprocal of the block's largest eigenvalue.
    Eigen::SelfAdjointEigenSolver<Mat> es(h_ss, Eigen::EigenvaluesOnly);
    CHECK(diag.K_H >= 1.0 / es.eigenvalues().maxCoeff() - 1e-12);
  }
}

TEST_CASE("ring precision has row degree 3 with self-loops counted") {
  const GroundTruth gt = gen_precision(gen_graph({Topology::ring, 16, 1, WeightDist::constant(1.0), 0}));
  const auto diag = theory_diagnostics(gt);
  CHECK(diag.max_degree == 3);
}

TEST_CASE("diagnostics dimension guard") {
  GroundTruth gt;
  gt.theta = Mat::Identity(8, 8);
  gt.sigma = Mat::Identity(8, 8);
  CHECK_THROWS_AS(theory_diagnostics(gt, {}, 4), std::invalid_argument);
}

TEST_CASE("recovery probability separates the extreme sample sizes") {
  GraphSpec spec{Topology::ring, 16, 1, WeightDist::constant(1.0), 11};
  RecoveryOptions opt;
  opt.mode = WeightMode::c_matrix;
  opt.c0 = 0.4;
  opt.threads = 2;
  const std::array<int, 2> grid{4, 8000};
  const auto rows = recovery_sweep(spec, opt, grid, 6);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].n == 4);
  CHECK(rows[0].n_over_logp == doctest::Approx(4.0 / std::log(16.0)));
  CHECK(rows[1].success_rate >= rows[0].success_rate);
  CHECK(rows[1].success_rate >= 0.5);
  CHECK(rows[0].success_rate <= 0.5);
}

TEST_SUITE_END();
