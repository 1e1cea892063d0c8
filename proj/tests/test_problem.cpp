#include "fpn/problem.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace fpn;

TEST_SUITE_BEGIN("problem");

namespace {

Mat mat2(double a, double b, double c, double d) {
  Mat m(2, 2);
  m << a, b, c, d;
  return m;
}

}  // namespace

TEST_CASE("instance construction validates its inputs") {
  CHECK_THROWS_AS(ProblemInstance::without_weights(mat2(0.0, 0, 0, 1.0)), std::invalid_argument);
  CHECK_THROWS_AS(ProblemInstance::without_weights(mat2(1.0, 0.5, 0.4, 1.0)), std::invalid_argument);
  CHECK_THROWS_AS(ProblemInstance(mat2(1, 0, 0, 1), mat2(0, -0.1, -0.1, 0)), std::invalid_argument);
  CHECK_THROWS_AS(ProblemInstance(mat2(1, 0, 0, 1), mat2(0.5, 0, 0, 0)), std::invalid_argument);
  IndexSet e;
  e.insert(0, 5);
  CHECK_THROWS_AS(ProblemInstance(mat2(1, 0, 0, 1), Mat::Zero(2, 2), e), std::invalid_argument);

  const auto prob = ProblemInstance(mat2(1, 0.25, 0.25, 1), mat2(0, 0.1, 0.1, 0));
  CHECK(prob.G()(0, 1) == doctest::Approx(0.15));
  CHECK(prob.G()(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("solver config bounds") {
  SolverConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.alpha = 1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.alpha = 0.05;
  cfg.beta = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("objective closed forms") {
  const auto id = ProblemInstance::without_weights(Mat::Identity(2, 2));
  CHECK(*objective_value(id, Mat::Identity(2, 2)) == doctest::Approx(2.0));

  const auto prob = ProblemInstance::without_weights(mat2(1, 0.5, 0.5, 1));
  const Mat x = mat2(4.0 / 3.0, -2.0 / 3.0, -2.0 / 3.0, 4.0 / 3.0);  // S^{-1}
  CHECK(*objective_value(prob, x) == doctest::Approx(2.0 + std::log(0.75)));

  CHECK_FALSE(objective_value(prob, mat2(1, 2, 2, 1)));
}

TEST_CASE("gradient vanishes at stationary points") {
  const auto id = ProblemInstance::without_weights(Mat::Identity(2, 2));
  CHECK(gradient(id, Mat::Identity(2, 2))->cwiseAbs().maxCoeff() < 1e-15);

  const auto prob = ProblemInstance::without_weights(mat2(1, 0.5, 0.5, 1));
  const Mat x = mat2(4.0 / 3.0, -2.0 / 3.0, -2.0 / 3.0, 4.0 / 3.0);
  CHECK(gradient(prob, x)->cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("gradient matches central finite differences at random feasible points") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 0.3);
  for (int trial = 0; trial < 20; ++trial) {
    const int p = 3 + static_cast<int>(rng() % 6);
    Mat s = oracles::random_spd(p, rng);
    s.diagonal().array() += 0.5;
    Mat lambda = Mat::Zero(p, p);
    for (int i = 0; i < p; ++i)
      for (int j = i + 1; j < p; ++j) lambda(i, j) = lambda(j, i) = u(rng);
    const ProblemInstance prob(s, lambda);
    const Mat x = oracles::random_feasible_mmatrix(p, rng);
    const Mat g = *gradient(prob, x);

    auto f = [&](const Mat& y) { return *objective_value(prob, y); };
    double max_rel = 0.0;
    for (int i = 0; i < p; ++i)
      for (int j = i; j < p; ++j) {
        const double fd = oracles::central_difference(f, x, i, j);
        max_rel = std::max(max_rel, std::abs(fd - g(i, j)) / std::max(1e-3, std::abs(g(i, j))));
      }
    CHECK(max_rel < 1e-5);
  }
}

TEST_CASE("objective is strictly convex along feasible segments") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 30; ++trial) {
    const int p = 3 + static_cast<int>(rng() % 4);
    const auto prob = ProblemInstance::without_weights(oracles::random_spd(p, rng));
    const Mat a = oracles::random_feasible_mmatrix(p, rng);
    const Mat b = oracles::random_feasible_mmatrix(p, rng);
    if ((a - b).cwiseAbs().maxCoeff() < 1e-9) continue;
    const double mid = *objective_value(prob, 0.5 * (a + b));
    const double ends = 0.5 * (*objective_value(prob, a) + *objective_value(prob, b));
    CHECK(mid < ends - 1e-12);
  }
}

TEST_CASE("kkt certificate on 2x2 closed forms") {
  // Negative-correlation instance: the minimizer is the identity with the
  // sign constraint active.
  const auto neg = ProblemInstance::without_weights(mat2(1, -0.5, -0.5, 1));
  auto rep = kkt_check(neg, Mat::Identity(2, 2));
  CHECK(rep.satisfied);
  CHECK(rep.max_grad_on_support < 1e-15);

  // Positive-correlation instance: S^{-1} is feasible, so the gradient is
  // exactly zero there.
  const auto pos = ProblemInstance::without_weights(mat2(1, 0.5, 0.5, 1));
  const Mat xstar = mat2(4.0 / 3.0, -2.0 / 3.0, -2.0 / 3.0, 4.0 / 3.0);
  rep = kkt_check(pos, xstar);
  CHECK(rep.satisfied);
  CHECK(rep.max_grad_on_support < 1e-13);
  CHECK(rep.max_positive_grad_on_zeroset == 0.0);
  CHECK(rep.max_abs_on_forced == 0.0);

  CHECK_FALSE(kkt_check(pos, 2.0 * xstar).satisfied);
}

TEST_CASE("kkt reports violations on the forced set") {
  IndexSet e;
  e.insert(0, 1);
  const ProblemInstance prob(mat2(1, -0.5, -0.5, 1), Mat::Zero(2, 2), e);
  Mat x = mat2(1.0, -0.2, -0.2, 1.0);
  const auto rep = kkt_check(prob, x);
  CHECK_FALSE(rep.satisfied);
  CHECK(rep.max_abs_on_forced == doctest::Approx(0.2));
}

TEST_SUITE_END();
