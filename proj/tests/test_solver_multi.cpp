#include <gtest/gtest.h>

#include "l1pca/solver_multi.hpp"
#include "oracles.hpp"

using namespace l1pca;

namespace {

constexpr SolveOptions kOne{.workers = 1};

double rel_gap(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

}  // namespace

TEST(Multiset, CountAndColexRank) {
  EXPECT_EQ(multiset_count(4, 2), 10u);
  EXPECT_EQ(multiset_count(512, 2), 131328u);
  EXPECT_EQ(multiset_count(0, 2), 0u);
  // Colex order of pairs from 3 items: 00 01 11 02 12 22.
  const std::vector<std::vector<Index>> order = {{0, 0}, {0, 1}, {1, 1}, {0, 2}, {1, 2}, {2, 2}};
  for (std::size_t i = 0; i < order.size(); ++i) EXPECT_EQ(multiset_colex_rank(order[i]), i);
}

TEST(Multiset, BestMultisetMatchesBruteForce) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Index K = 1 + static_cast<Index>(seed % 4);
    const Matrix Y = oracle::gaussian(3, 6, seed);
    const MultisetSearch s = best_multiset(Y, K, 1 + seed % 3);
    // Direct enumeration of all K-tuples.
    double best = 0.0;
    std::vector<Index> z(static_cast<std::size_t>(K), 0);
    while (true) {
      Matrix M(3, K);
      for (Index k = 0; k < K; ++k) M.col(k) = Y.col(z[static_cast<std::size_t>(k)]);
      best = std::max(best, oracle::nuclear(M));
      Index i = 0;
      while (i < K && ++z[static_cast<std::size_t>(i)] == 6) z[static_cast<std::size_t>(i++)] = 0;
      if (i == K) break;
    }
    EXPECT_LE(rel_gap(s.nuclear, best), 1e-9) << "seed " << seed << " K " << K;
    EXPECT_TRUE(std::is_sorted(s.best.begin(), s.best.end()));
    EXPECT_EQ(s.evaluated, multiset_count(6, static_cast<std::uint64_t>(K)));
  }
}

TEST(SolverMulti, ExhaustiveMatchesBruteForce) {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const int D = 2 + static_cast<int>(seed % 3);
    const int N = 3 + static_cast<int>(seed % 4);
    const Matrix X = oracle::gaussian(D, N, 40 + seed);
    const SolveResult r = solve_multi_exhaustive(X, 2, kOne);
    const double best = oracle::best_multi(X, 2);
    EXPECT_LE(rel_gap(r.metric, best), 1e-9) << "seed " << seed;
    EXPECT_LE(rel_gap(nuclear_norm(X * as_real(r.signs)), best), 1e-9);
  }
}

TEST(SolverMulti, PolyTiesExhaustive) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const int d = 2 + static_cast<int>(seed % 2);
    const int N = 4 + static_cast<int>(seed % 5);
    const Matrix X = oracle::low_rank(4, N, d, 900 + seed);
    const SolveResult p = solve_multi_poly(X, 2, kOne);
    const SolveResult e = solve_multi_exhaustive(X, 2, kOne);
    EXPECT_LE(rel_gap(p.metric, e.metric), 1e-9) << "seed " << seed;
  }
}

TEST(SolverMulti, ThreeComponents) {
  const Matrix X = oracle::gaussian(3, 5, 12);
  const SolveResult e = solve_multi_exhaustive(X, 3, kOne);
  const SolveResult p = solve_multi_poly(X, 3, kOne);
  EXPECT_LE(rel_gap(e.metric, oracle::best_multi(X, 3)), 1e-9);
  EXPECT_LE(rel_gap(p.metric, e.metric), 1e-9);
}

TEST(SolverMulti, SubspaceIsOrthonormalAndAttainsNuclearNorm) {
  const Matrix X = oracle::gaussian(5, 7, 3);
  const SolveResult r = solve_multi(X, 2, MultiStrategy::Auto, kOne);
  EXPECT_LT((r.subspace.basis.transpose() * r.subspace.basis - Matrix::Identity(2, 2)).norm(), 1e-12);
  EXPECT_LE(rel_gap((r.subspace.basis.transpose() * X).cwiseAbs().sum(), nuclear_norm(X * as_real(r.signs))), 1e-9);
  EXPECT_EQ(r.signs.rows(), 7);
  EXPECT_EQ(r.signs.cols(), 2);
}

TEST(SolverMulti, CanonicalSignMatrix) {
  SignMatrix B(2, 2);
  B << -1, 1, 1, -1;
  const SignMatrix C = canonical_sign_matrix(B);
  EXPECT_EQ(C.row(0), (SignMatrix(1, 2) << 1, 1).finished());
}

TEST(SolverMulti, KAboveRankPadsOnlyForExhaustive) {
  const Matrix X = oracle::low_rank(4, 5, 1, 6);
  EXPECT_THROW(solve_multi_poly(X, 2, kOne), ContractViolation);
  const SolveResult r = solve_multi(X, 2, MultiStrategy::Auto, kOne);
  EXPECT_EQ(r.method, Method::MultiExhaustive);
  EXPECT_LT((r.subspace.basis.transpose() * r.subspace.basis - Matrix::Identity(2, 2)).norm(), 1e-10);
  EXPECT_THROW(solve_multi_exhaustive(X, 5, kOne), ContractViolation);
}

TEST(SolverMulti, AutoDispatch) {
  EXPECT_EQ(auto_multi_strategy(8, 4, 2, 1u << 24), MultiStrategy::Exhaustive);
  EXPECT_EQ(auto_multi_strategy(10, 10, 2, 1u << 24), MultiStrategy::Exhaustive);
  EXPECT_EQ(auto_multi_strategy(50, 2, 2, 1u << 24), MultiStrategy::Poly);
  EXPECT_EQ(solve_multi(oracle::gaussian(3, 4, 1), 1, MultiStrategy::Auto, kOne).method, Method::Exhaustive);
  EXPECT_THROW(solve_multi(oracle::gaussian(3, 4, 1), 0), ContractViolation);
}

TEST(SolverMulti, BudgetRefusal) {
  EXPECT_THROW(solve_multi_exhaustive(oracle::gaussian(3, 20, 1), 2, {.budget = 1000, .workers = 1}), BudgetExceeded);
}

TEST(SolverMulti, WorkerCountInvariant) {
  const Matrix X = oracle::gaussian(3, 9, 17);
  const SolveResult a = solve_multi_exhaustive(X, 2, kOne);
  const SolveResult b = solve_multi_exhaustive(X, 2, {.workers = 4});
  EXPECT_EQ(a.signs, b.signs);
  EXPECT_EQ(a.metric, b.metric);
}
