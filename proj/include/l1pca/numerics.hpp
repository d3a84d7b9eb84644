#ifndef L1PCA_NUMERICS_HPP
#define L1PCA_NUMERICS_HPP

// Dense linear-algebra primitives shared by every solver. All routines are
// pure functions of their arguments and may be called concurrently.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "l1pca/errors.hpp"

namespace l1pca {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// D x N data matrix; samples are columns.
using DataMatrix = Matrix;

inline constexpr double kDefaultRankTol = 1e-10;

/// sgn with sgn(0) = +1.
inline int sgn(double x) noexcept { return x >= 0.0 ? 1 : -1; }

struct SvdFactors {
  Matrix U;  // D x d
  Vector S;  // d, strictly positive, nonincreasing
  Matrix V;  // N x d
  Index rank() const noexcept { return S.size(); }
};

/// Q (N x d) with X^T X = Q Q^T; columns ordered by decreasing weight.
struct EigenBasis {
  Matrix Q;
  Index rank() const noexcept { return Q.cols(); }
};

/// Orthonormal D x K basis R (R^T R = I_K).
struct Subspace {
  Matrix basis;
  Index dim() const noexcept { return basis.rows(); }
  Index components() const noexcept { return basis.cols(); }
  Matrix projector() const { return basis * basis.transpose(); }
};

inline void require_finite(const Matrix& M, const char* what) {
  if (M.size() == 0) throw std::invalid_argument(std::string(what) + ": empty matrix");
  if (!M.allFinite()) throw std::invalid_argument(std::string(what) + ": non-finite entry");
}

/// Compact SVD keeping singular values above rank_tol * sigma_max.
/// Throws ZeroRankError for an all-zero matrix.
inline SvdFactors compact_svd(const Matrix& M, double rank_tol = kDefaultRankTol) {
  require_finite(M, "compact_svd");
  if (!(rank_tol > 0.0 && rank_tol < 1.0)) throw std::invalid_argument("compact_svd: rank_tol must lie in (0,1)");
  Eigen::JacobiSVD<Matrix, Eigen::ColPivHouseholderQRPreconditioner> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& s = svd.singularValues();
  if (s.size() == 0 || s(0) <= 0.0) throw ZeroRankError();
  Index d = 0;
  while (d < s.size() && s(d) > rank_tol * s(0)) ++d;
  return {svd.matrixU().leftCols(d), s.head(d), svd.matrixV().leftCols(d)};
}

/// Eigenvalue-weighted eigenvectors of X^T X, Q = V diag(S).
inline EigenBasis eigen_basis(const DataMatrix& X, double rank_tol = kDefaultRankTol) {
  SvdFactors f = compact_svd(X, rank_tol);
  return {f.V * f.S.asDiagonal()};
}

/// Unit vector spanning the null space of an (m-1) x m matrix, or nullopt when
/// the rows are linearly dependent (null space of dimension > 1).
inline std::optional<Vector> null_space_vector(const Matrix& M, double rank_tol = kDefaultRankTol) {
  const Index m = M.cols();
  if (m < 2 || M.rows() != m - 1) throw std::invalid_argument("null_space_vector: expected (m-1) x m matrix with m >= 2");
  Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeFullV);
  const Vector& s = svd.singularValues();
  if (s(0) <= 0.0 || s(s.size() - 1) <= rank_tol * s(0)) return std::nullopt;
  Vector c = svd.matrixV().col(m - 1);
  return c / c.norm();
}

inline double nuclear_norm(const Matrix& M) {
  if (M.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(M);
  return svd.singularValues().sum();
}

namespace detail {

// Extend the orthonormal columns of U to `target` columns with canonical axes
// projected off the current span.
inline Matrix complete_orthonormal(const Matrix& U, Index rows, Index target) {
  Matrix out(rows, target);
  Index have = U.cols();
  out.leftCols(have) = U;
  for (Index axis = 0; axis < rows && have < target; ++axis) {
    Vector v = Vector::Unit(rows, axis);
    for (int pass = 0; pass < 2; ++pass) v -= out.leftCols(have) * (out.leftCols(have).transpose() * v);
    const double n = v.norm();
    if (n > 1e-6) out.col(have++) = v / n;
  }
  return out;
}

}  // namespace detail

/// Orthonormal Procrustes fit: R = U V^T maximizes trace(R^T A), attaining
/// the nuclear norm of A. Rank-deficient A is padded with an orthonormal
/// complement of its column space.
inline Subspace procrustes(const Matrix& A, double rank_tol = kDefaultRankTol) {
  require_finite(A, "procrustes");
  const Index D = A.rows();
  const Index K = A.cols();
  if (K > D) throw ContractViolation("procrustes: more columns than rows");
  Eigen::JacobiSVD<Matrix, Eigen::ColPivHouseholderQRPreconditioner> svd(A, Eigen::ComputeThinU | Eigen::ComputeFullV);
  const Vector& s = svd.singularValues();
  Index r = 0;
  while (r < s.size() && s(0) > 0.0 && s(r) > rank_tol * s(0)) ++r;
  Matrix U = r == K ? Matrix(svd.matrixU()) : detail::complete_orthonormal(svd.matrixU().leftCols(r), D, K);
  return {U * svd.matrixV().transpose()};
}

}  // namespace l1pca

#endif  // L1PCA_NUMERICS_HPP
