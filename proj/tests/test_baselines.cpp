#include "fpn/baselines.hpp"

#include "fpn/datagen.hpp"
#include "fpn/weights.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace fpn;

TEST_SUITE_BEGIN("baselines");

namespace {

Mat mat2(double a, double b, double c, double d) {
  Mat m(2, 2);
  m << a, b, c, d;
  return m;
}

ProblemInstance ba_instance(int p, int n, std::uint64_t seed, double sigma = 0.01) {
  GraphSpec spec{Topology::ba, p, 1, WeightDist::uniform_range(2, 5), seed};
  const GroundTruth gt = gen_precision(gen_graph(spec));
  const Dataset ds = sample_gaussian(gt, n, mix_seed(seed, 5));
  return ProblemInstance(ds.S, adaptive_weights(mle_pilot(ds.S), sigma));
}

}  // namespace

TEST_CASE("pgd reaches the 2x2 closed-form optimum") {
  const SolveResult res = pgd_solve(ProblemInstance::without_weights(mat2(1, -0.5, -0.5, 1)));
  CHECK(res.status == SolveStatus::kkt_satisfied);
  CHECK((res.X_star - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-8);
  for (std::size_t k = 1; k < res.trace.size(); ++k)
    CHECK(res.trace[k].objective <= res.trace[k - 1].objective);
}

TEST_CASE("pgd terminates immediately at a stationary feasible start") {
  const auto prob = ProblemInstance::without_weights(mat2(1, 0.5, 0.5, 1));
  const Mat x0 = mat2(4.0 / 3.0, -2.0 / 3.0, -2.0 / 3.0, 4.0 / 3.0);  // S^{-1} is an M-matrix
  const SolveResult res = pgd_solve(prob, {}, x0);
  CHECK(res.status == SolveStatus::kkt_satisfied);
  CHECK(res.iterations == 0);
  CHECK(res.trace.size() == 1);
}

TEST_CASE("pgd and fpn certify the same objective on random instances") {
  SolverConfig cfg;
  cfg.max_iter = 20000;
  for (std::uint64_t seed : {11ull, 12ull}) {
    const auto prob = ba_instance(20, 400, seed);
    const SolveResult f = fpn_solve(prob, cfg);
    const SolveResult g = pgd_solve(prob, cfg);
    REQUIRE(f.status == SolveStatus::kkt_satisfied);
    REQUIRE(g.status == SolveStatus::kkt_satisfied);
    const double ff = f.trace.back().objective;
    const double fg = g.trace.back().objective;
    CHECK(std::abs(ff - fg) <= 1e-9 * std::abs(ff));
  }
}

TEST_CASE("apgd reaches the certified 2x2 optima") {
  SolveResult res = apgd_solve(ProblemInstance::without_weights(mat2(1, -0.5, -0.5, 1)));
  CHECK(res.status == SolveStatus::kkt_satisfied);
  CHECK((res.X_star - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-8);

  res = apgd_solve(ProblemInstance::without_weights(mat2(1, 0.5, 0.5, 1)));
  CHECK(res.status == SolveStatus::kkt_satisfied);
  CHECK((res.X_star - mat2(4.0 / 3.0, -2.0 / 3.0, -2.0 / 3.0, 4.0 / 3.0)).cwiseAbs().maxCoeff() <
        1e-8);
}

TEST_CASE("apgd needs no more iterations than pgd on a mid-size instance") {
  const auto prob = ba_instance(40, 800, 21);
  SolverConfig cfg;
  cfg.max_iter = 20000;
  const SolveResult ref = fpn_solve(prob, [] {
    SolverConfig c;
    c.kkt_tol = 1e-10;
    return c;
  }());
  REQUIRE(ref.status == SolveStatus::kkt_satisfied);
  const double fstar = ref.trace.back().objective;

  auto iters_to = [&](const SolveResult& res, double target) {
    for (const auto& row : res.trace)
      if (std::abs(row.objective - fstar) / std::abs(fstar) <= target) return row.iter;
    return res.trace.back().iter + 1;
  };
  const SolveResult a = apgd_solve(prob, cfg, std::nullopt, fstar);
  const SolveResult g = pgd_solve(prob, cfg, std::nullopt, fstar);
  REQUIRE(a.status == SolveStatus::kkt_satisfied);
  REQUIRE(g.status == SolveStatus::kkt_satisfied);
  CHECK(iters_to(a, 1e-6) <= iters_to(g, 1e-6));
}

TEST_CASE("the unpartitioned Newton iterate stalls where fpn converges") {
  const auto prob = ba_instance(40, 400, 33);
  SolverConfig cfg;
  cfg.max_iter = 500;
  const SolveResult ref = fpn_solve(prob, [] {
    SolverConfig c;
    c.kkt_tol = 1e-10;
    return c;
  }());
  REQUIRE(ref.status == SolveStatus::kkt_satisfied);
  const double fstar = ref.trace.back().objective;

  const SolveResult demo = full_newton_demo(prob, cfg, std::nullopt, fstar);
  const SolveResult fpn = fpn_solve(prob, cfg, std::nullopt, fstar);
  CHECK(fpn.trace.back().rel_error <= 1e-9);
  CHECK(demo.trace.back().rel_error > 1e-6);
  // Stalling is reported, not thrown.
  CHECK(demo.status == SolveStatus::line_search_stalled);
}

TEST_CASE("the Newton demo converges when no constraint activates") {
  // Positive-correlation 2x2: the unconstrained optimum S^{-1} is feasible,
  // so the projection never truncates and the iterate is plain Newton.
  const SolveResult res =
      full_newton_demo(ProblemInstance::without_weights(mat2(1, 0.5, 0.5, 1)));
  CHECK(res.status == SolveStatus::kkt_satisfied);
  CHECK((res.X_star - mat2(4.0 / 3.0, -2.0 / 3.0, -2.0 / 3.0, 4.0 / 3.0)).cwiseAbs().maxCoeff() <
        1e-8);
}

TEST_CASE("the Newton demo exits at an optimum without stepping") {
  const auto prob = ProblemInstance::without_weights(mat2(1, -0.5, -0.5, 1));
  const SolveResult res = full_newton_demo(prob, {}, Mat::Identity(2, 2).eval());
  CHECK(res.status == SolveStatus::kkt_satisfied);
  CHECK(res.iterations == 0);
}

TEST_CASE("subproblem solver certifies the same optima") {
  for (auto s : {mat2(1, -0.5, -0.5, 1), mat2(1, 0.5, 0.5, 1)}) {
    const auto prob = ProblemInstance::without_weights(s);
    const SolveResult sub = subproblem_exact_solve(prob);
    const SolveResult ref = fpn_solve(prob);
    REQUIRE(sub.status == SolveStatus::kkt_satisfied);
    CHECK((sub.X_star - ref.X_star).cwiseAbs().maxCoeff() < 1e-7);
  }

  const auto prob = ba_instance(15, 300, 44);
  const SolveResult sub = subproblem_exact_solve(prob);
  const SolveResult ref = fpn_solve(prob);
  REQUIRE(sub.status == SolveStatus::kkt_satisfied);
  REQUIRE(ref.status == SolveStatus::kkt_satisfied);
  const double fs = sub.trace.back().objective;
  const double fr = ref.trace.back().objective;
  CHECK(std::abs(fs - fr) <= 1e-8 * std::abs(fr));
  CHECK(sub.total_inner_iterations > 0);
}

TEST_CASE("a zero-budget inner loop degenerates to projected gradient steps") {
  const auto prob = ProblemInstance::without_weights(mat2(1, 0.5, 0.5, 1));
  InnerConfig inner;
  inner.max_inner_iters = 0;
  SolverConfig cfg;
  cfg.max_iter = 20000;
  const SolveResult res = subproblem_exact_solve(prob, cfg, std::nullopt, inner);
  CHECK(res.status == SolveStatus::kkt_satisfied);
  CHECK(res.total_inner_iterations == 0);
  CHECK((res.X_star - mat2(4.0 / 3.0, -2.0 / 3.0, -2.0 / 3.0, 4.0 / 3.0)).cwiseAbs().maxCoeff() <
        1e-7);
}

TEST_SUITE_END();
