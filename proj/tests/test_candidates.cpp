#include <gtest/gtest.h>

#include <set>

#include "l1pca/candidates.hpp"
#include "oracles.hpp"

using namespace l1pca;

namespace {

std::set<std::vector<int>> as_set(const CandidateSet& S) {
  std::set<std::vector<int>> out;
  for (const auto& b : S.columns) out.insert(std::vector<int>(b.data(), b.data() + b.size()));
  return out;
}

}  // namespace

TEST(Candidates, Binomial) {
  EXPECT_EQ(binomial(7, 2), 21u);
  EXPECT_EQ(binomial(9, 3), 84u);
  EXPECT_EQ(binomial(3, 5), 0u);
  EXPECT_EQ(binomial(200, 100), UINT64_MAX);
}

TEST(Candidates, CountBound) {
  EXPECT_EQ(candidate_count_bound(8, 3), 29u);
  EXPECT_EQ(candidate_count_bound(10, 2), 10u);
  EXPECT_EQ(candidate_count_bound(10, 4), 130u);
  EXPECT_EQ(candidate_count_bound(5, 1), 1u);
  for (int N = 2; N < 12; ++N)
    for (int d = 1; d <= N; ++d)
      EXPECT_EQ(candidate_count_bound(N, d), oracle::central_arrangement_cells_half(N, d));
}

TEST(Candidates, CanonicalizeAndPack) {
  SignVector b(3);
  b << -1, 1, -1;
  const SignVector c = canonicalize(b);
  EXPECT_EQ(c(0), 1);
  EXPECT_EQ(c(1), -1);
  EXPECT_EQ(pack(c), PackedSigns{0b010});
  EXPECT_EQ(sign_of(Vector::Zero(2)), SignVector::Ones(2));
}

class CandidateCardinality : public ::testing::TestWithParam<std::tuple<int, int, std::uint64_t>> {};

TEST_P(CandidateCardinality, GenericCountMatchesFormula) {
  const auto [N, d, expected] = GetParam();
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Matrix Q = oracle::gaussian(N, d, 1000 + seed);
    const CandidateSet S = compute_candidates(Q);
    EXPECT_EQ(S.size(), expected) << "seed " << seed;
    EXPECT_EQ(S.skipped_subsets, 0u);
    EXPECT_EQ(S.unresolved_entries, 0u);
  }
}

INSTANTIATE_TEST_SUITE_P(Cardinality, CandidateCardinality,
                         ::testing::Values(std::make_tuple(8, 3, 29u), std::make_tuple(10, 2, 10u),
                                           std::make_tuple(10, 4, 130u), std::make_tuple(6, 1, 1u),
                                           std::make_tuple(7, 5, 57u)));

TEST(Candidates, CoversEverySampledCell) {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const int N = 5 + static_cast<int>(seed % 5);
    const int d = 2 + static_cast<int>(seed % 3);
    const Matrix Q = oracle::gaussian(N, d, seed);
    const auto found = as_set(compute_candidates(Q));
    for (const auto& cell : oracle::sampled_cells(Q, 20000, seed + 99))
      EXPECT_TRUE(found.count(cell)) << "N=" << N << " d=" << d << " seed " << seed;
  }
}

TEST(Candidates, ContainsEveryMaximizer) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const int D = 2 + static_cast<int>(seed % 4);
    const int N = 4 + static_cast<int>(seed % 7);
    const Matrix X = oracle::gaussian(D, N, 500 + seed);
    const auto found = as_set(compute_candidates(eigen_basis(X).Q));
    for (const Vector& b : oracle::single_maximizers(X)) {
      std::vector<int> v(static_cast<std::size_t>(N));
      const double flip = b(0);
      for (int n = 0; n < N; ++n) v[static_cast<std::size_t>(n)] = static_cast<int>(flip * b(n));
      EXPECT_TRUE(found.count(v)) << "seed " << seed;
    }
  }
}

TEST(Candidates, MembersAreCanonicalAndDistinct) {
  const CandidateSet S = compute_candidates(oracle::gaussian(9, 3, 4));
  EXPECT_EQ(as_set(S).size(), S.size());
  for (const auto& b : S.columns) EXPECT_EQ(b(0), 1);
  EXPECT_EQ(S.as_matrix().cols(), static_cast<Index>(S.size()));
}

TEST(Candidates, ZeroRowsAreForcedPositive) {
  Matrix Q = oracle::gaussian(6, 2, 8);
  Q.row(3).setZero();
  const CandidateSet S = compute_candidates(Q);
  EXPECT_EQ(S.zero_rows, 1u);
  for (const auto& b : S.columns) EXPECT_EQ(b(3), 1);
}

TEST(Candidates, WorkerCountInvariant) {
  const Matrix Q = oracle::gaussian(11, 4, 21);
  const CandidateSet a = compute_candidates(Q, kDefaultRankTol, 1);
  const CandidateSet b = compute_candidates(Q, kDefaultRankTol, 3);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a.columns[i], b.columns[i]);
}
