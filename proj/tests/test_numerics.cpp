#include <gtest/gtest.h>

#include "l1pca/numerics.hpp"
#include "l1pca/parallel.hpp"
#include "oracles.hpp"

using namespace l1pca;

TEST(Numerics, SgnMapsZeroToPlusOne) {
  EXPECT_EQ(sgn(0.0), 1);
  EXPECT_EQ(sgn(-0.0), 1);
  EXPECT_EQ(sgn(2.5), 1);
  EXPECT_EQ(sgn(-1e-300), -1);
}

TEST(Numerics, CompactSvdReconstructs) {
  const Matrix X = oracle::gaussian(4, 7, 11);
  const SvdFactors f = compact_svd(X);
  EXPECT_EQ(f.rank(), 4);
  EXPECT_LT((f.U * f.S.asDiagonal() * f.V.transpose() - X).norm(), 1e-12 * X.norm());
  EXPECT_LT((f.U.transpose() * f.U - Matrix::Identity(4, 4)).norm(), 1e-12);
  for (Index i = 1; i < f.S.size(); ++i) EXPECT_GE(f.S(i - 1), f.S(i));
}

TEST(Numerics, CompactSvdTruncatesRank) {
  const Matrix X = oracle::low_rank(6, 9, 2, 3);
  const SvdFactors f = compact_svd(X);
  EXPECT_EQ(f.rank(), 2);
  EXPECT_EQ(f.U.cols(), 2);
  EXPECT_EQ(f.V.rows(), 9);
}

TEST(Numerics, CompactSvdRejectsZeroAndNonFinite) {
  EXPECT_THROW(compact_svd(Matrix::Zero(3, 4)), ZeroRankError);
  Matrix X = Matrix::Ones(2, 2);
  X(1, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(compact_svd(X), std::invalid_argument);
  EXPECT_THROW(compact_svd(Matrix::Ones(2, 2), 0.0), std::invalid_argument);
}

TEST(Numerics, EigenBasisFactorsGram) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Matrix X = oracle::gaussian(3 + seed % 3, 6 + seed % 4, seed);
    const EigenBasis E = eigen_basis(X);
    EXPECT_LT((E.Q * E.Q.transpose() - X.transpose() * X).norm(), 1e-10 * (X.transpose() * X).norm());
    // Scoring through Q matches scoring through X.
    const Vector b = oracle::signs_of_mask(X.cols(), seed * 7);
    EXPECT_NEAR((E.Q.transpose() * b).norm(), (X * b).norm(), 1e-10 * (X * b).norm());
  }
}

TEST(Numerics, NullSpaceVector) {
  const Matrix A = oracle::gaussian(3, 4, 5);
  const auto c = null_space_vector(A);
  ASSERT_TRUE(c.has_value());
  EXPECT_NEAR(c->norm(), 1.0, 1e-12);
  EXPECT_LT((A * *c).norm(), 1e-12);

  Matrix dep = A;
  dep.row(2) = dep.row(0) + dep.row(1);
  EXPECT_FALSE(null_space_vector(dep).has_value());
  EXPECT_THROW(null_space_vector(Matrix::Ones(2, 2)), std::invalid_argument);
}

TEST(Numerics, NuclearNorm) {
  Matrix M(2, 2);
  M << 3, 0, 0, -4;
  EXPECT_NEAR(nuclear_norm(M), 7.0, 1e-12);
  const Matrix G = oracle::gaussian(5, 3, 2);
  EXPECT_NEAR(nuclear_norm(G), oracle::nuclear(G), 1e-12);
}

TEST(Numerics, ProcrustesAttainsNuclearNorm) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Matrix A = oracle::gaussian(6, 1 + seed % 4, seed);
    const Subspace R = procrustes(A);
    EXPECT_LT((R.basis.transpose() * R.basis - Matrix::Identity(A.cols(), A.cols())).norm(), 1e-12);
    EXPECT_NEAR((R.basis.transpose() * A).trace(), oracle::nuclear(A), 1e-10 * oracle::nuclear(A));
  }
}

TEST(Numerics, ProcrustesPadsRankDeficientInput) {
  Matrix A(4, 2);
  A.col(0) << 1, 2, 0, 0;
  A.col(1) = 2.0 * A.col(0);
  const Subspace R = procrustes(A);
  EXPECT_LT((R.basis.transpose() * R.basis - Matrix::Identity(2, 2)).norm(), 1e-12);
  EXPECT_NEAR((R.basis.transpose() * A).trace(), oracle::nuclear(A), 1e-10);
  EXPECT_THROW(procrustes(Matrix::Ones(2, 3)), ContractViolation);
}

TEST(Parallel, SlicesPartitionTheRange) {
  for (unsigned workers : {1u, 2u, 3u, 7u}) {
    std::uint64_t next = 0;
    for (unsigned w = 0; w < workers; ++w) {
      const Slice s = slice_for(20, workers, w);
      EXPECT_EQ(s.begin, next);
      next = s.end;
    }
    EXPECT_EQ(next, 20u);
  }
}

TEST(Parallel, RunWorkersRethrows) {
  EXPECT_THROW(run_workers(3, [](unsigned w) {
                 if (w == 2) throw std::runtime_error("boom");
               }),
               std::runtime_error);
  std::vector<int> hit(4, 0);
  run_workers(4, [&](unsigned w) { hit[w] = 1; });
  EXPECT_EQ(std::count(hit.begin(), hit.end(), 1), 4);
  EXPECT_GE(resolve_workers(0), 1u);
}
