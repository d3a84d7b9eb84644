#include <gtest/gtest.h>

#include "l1pca/heuristics.hpp"
#include "oracles.hpp"

using namespace l1pca;

TEST(Heuristics, FixedPointAscendsAndStaysBelowOptimum) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Matrix X = oracle::gaussian(2 + seed % 4, 4 + seed % 9, seed);
    const HeuristicResult h = fixed_point_single(X);
    const auto& m = h.trace.metrics;
    ASSERT_GE(m.size(), 2u);
    for (std::size_t i = 1; i < m.size(); ++i) EXPECT_GE(m[i], m[i - 1] * (1 - 1e-12)) << "seed " << seed;
    EXPECT_TRUE(h.trace.converged);
    EXPECT_LE(h.result.metric, oracle::best_single(X) * (1 + 1e-12));
    EXPECT_FALSE(h.result.exact);
    EXPECT_EQ(h.result.method, Method::FixedPoint);
  }
}

TEST(Heuristics, FixedPointFromOptimumStays) {
  const Matrix X = oracle::gaussian(3, 8, 4);
  const SolveResult exact = solve_exhaustive(X, {.workers = 1});
  const HeuristicResult h = fixed_point_single(X, exact.sign_vector());
  EXPECT_EQ(h.trace.iterations, 1u);
  EXPECT_NEAR(h.result.metric, exact.metric, 1e-12 * exact.metric);
}

TEST(Heuristics, IterationCapIsHonoured) {
  const Matrix X = oracle::gaussian(4, 12, 9);
  const HeuristicResult h = fixed_point_single_seeded(X, 3, 1);
  EXPECT_EQ(h.trace.iterations, 1u);
  EXPECT_THROW(fixed_point_single(X, 0), std::invalid_argument);
  EXPECT_THROW(fixed_point_single(X, SignVector::Ones(3)), std::invalid_argument);
}

TEST(Heuristics, FixedPointMultiAscends) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Matrix X = oracle::gaussian(4, 6 + seed % 3, 70 + seed);
    const HeuristicResult h = fixed_point_multi(X, 2);
    const auto& m = h.trace.metrics;
    for (std::size_t i = 2; i < m.size(); ++i) EXPECT_GE(m[i], m[i - 1] * (1 - 1e-12)) << "seed " << seed;
    EXPECT_LE(h.result.metric, solve_multi_exhaustive(X, 2, {.workers = 1}).metric * (1 + 1e-12));
    EXPECT_LT((h.result.subspace.basis.transpose() * h.result.subspace.basis - Matrix::Identity(2, 2)).norm(), 1e-10);
  }
}

TEST(Heuristics, GreedyDeflation) {
  const Matrix X = oracle::gaussian(4, 9, 5);
  const SolveResult g = greedy_deflation(X, 3);
  EXPECT_EQ(g.method, Method::Greedy);
  EXPECT_LT((g.subspace.basis.transpose() * g.subspace.basis - Matrix::Identity(3, 3)).norm(), 1e-10);
  EXPECT_LE(g.metric, solve_multi_exhaustive(X, 3, {.workers = 1}).metric * (1 + 1e-12));
  EXPECT_EQ(greedy_deflation(X, 1).method, Method::Greedy);
  EXPECT_THROW(greedy_deflation(X, 5), ContractViolation);
}
