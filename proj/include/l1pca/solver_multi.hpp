#ifndef L1PCA_SOLVER_MULTI_HPP
#define L1PCA_SOLVER_MULTI_HPP

// Jointly optimal K-dimensional L1-principal subspace. The problem reduces to
// B_opt = argmax_B ||X B||_* over N x K sign matrices; R = U V^T from the SVD
// of X B_opt then attains ||X^T R||_1 = ||X B_opt||_*.

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "l1pca/candidates.hpp"
#include "l1pca/numerics.hpp"
#include "l1pca/parallel.hpp"
#include "l1pca/solver_single.hpp"

namespace l1pca {

enum class MultiStrategy { Auto, Exhaustive, Poly };

/// Procrustes subspace of X B; R^T R = I_K and trace(R^T X B) = ||X B||_*.
inline Subspace subspace_from_signs(const DataMatrix& X, const SignMatrix& B, double rank_tol = kDefaultRankTol) {
  if (X.cols() != B.rows()) throw std::invalid_argument("subspace_from_signs: dimension mismatch");
  return procrustes(X * as_real(B), rank_tol);
}

/// Columns individually canonicalized, then sorted with +1 ordered before -1.
inline SignMatrix canonical_sign_matrix(const SignMatrix& B) {
  std::vector<SignVector> cols;
  for (Index k = 0; k < B.cols(); ++k) cols.push_back(canonicalize(B.col(k)));
  std::sort(cols.begin(), cols.end(), [](const SignVector& a, const SignVector& b) {
    for (Index n = 0; n < a.size(); ++n)
      if (a(n) != b(n)) return a(n) > b(n);
    return false;
  });
  SignMatrix out(B.rows(), B.cols());
  for (Index k = 0; k < B.cols(); ++k) out.col(k) = cols[static_cast<std::size_t>(k)];
  return out;
}

/// Number of size-K multisets drawn from P items, C(P+K-1, K).
inline std::uint64_t multiset_count(std::uint64_t P, std::uint64_t K) {
  if (P == 0) return 0;
  return binomial(P + K - 1, K);
}

/// Colexicographic rank of a nondecreasing index tuple.
inline std::uint64_t multiset_colex_rank(const std::vector<Index>& z) {
  std::uint64_t r = 0;
  for (std::size_t i = 0; i < z.size(); ++i)
    r += binomial(static_cast<std::uint64_t>(z[i]) + i, i + 1);
  return r;
}

struct MultisetSearch {
  std::vector<Index> best;  // nondecreasing column indices
  double nuclear = 0.0;     // ||Y_{:,best}||_*
  std::uint64_t evaluated = 0;
  std::uint64_t ties = 0;
};

namespace detail {

// ||a||^2 ||b||^2 - (a.b)^2; the difference form loses all accuracy for
// nearly parallel columns, where the sum of squared 2x2 minors is used.
inline double gram_det2(const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b, double aa, double bb) {
  const double ab = a.dot(b);
  const double det = aa * bb - ab * ab;
  if (det > 1e-4 * aa * bb) return det;
  double minors = 0.0;
  for (Index i = 0; i < a.size(); ++i)
    for (Index j = i + 1; j < a.size(); ++j) {
      const double m = a(i) * b(j) - a(j) * b(i);
      minors += m * m;
    }
  return minors;
}

// Squared nuclear norm of the columns of Y picked by z.
inline double nuclear_squared(const Matrix& Y, const std::vector<Index>& z, Matrix& scratch) {
  for (std::size_t k = 0; k < z.size(); ++k) scratch.col(static_cast<Index>(k)) = Y.col(z[k]);
  Eigen::JacobiSVD<Matrix> svd(scratch);
  const double s = svd.singularValues().sum();
  return s * s;
}

}  // namespace detail

/// Maximizes ||[Y_{z_1} ... Y_{z_K}]||_* over nondecreasing tuples z of
/// column indices of Y. Ties go to the lowest colexicographic rank. Work is
/// split across workers by the last (colex-major) index.
inline MultisetSearch best_multiset(const Matrix& Y, Index K, unsigned workers = 1) {
  const Index P = Y.cols();
  if (K < 1 || P < 1) throw std::invalid_argument("best_multiset: need K >= 1 and at least one column");
  workers = static_cast<unsigned>(std::min<Index>(std::max(1u, workers), P));
  const Vector sq = Y.colwise().squaredNorm().transpose();
  std::vector<detail::BestSoFar> best(workers);

  run_workers(workers, [&](unsigned w) {
    detail::BestSoFar local;
    std::vector<Index> z(static_cast<std::size_t>(K));
    Matrix picked(Y.rows(), K);
    for (Index last = w; last < P; last += workers) {
      if (K == 1) {
        local.offer(sq(last), static_cast<std::uint64_t>(last));
        continue;
      }
      if (K == 2) {
        const auto y = Y.col(last);
        for (Index first = 0; first <= last; ++first) {
          const double det = detail::gram_det2(Y.col(first), y, sq(first), sq(last));
          const double score = sq(first) + sq(last) + 2.0 * std::sqrt(det);
          local.offer(score, binomial(static_cast<std::uint64_t>(last) + 1, 2) + static_cast<std::uint64_t>(first));
        }
        continue;
      }
      // General K: odometer over z_0 <= ... <= z_{K-2} <= last.
      std::fill(z.begin(), z.end(), 0);
      z.back() = last;
      while (true) {
        local.offer(detail::nuclear_squared(Y, z, picked), multiset_colex_rank(z));
        // Colex successor of the prefix: bump the lowest entry that can grow.
        Index grow = 0;
        while (grow <= K - 2 && z[static_cast<std::size_t>(grow)] == z[static_cast<std::size_t>(grow + 1)]) ++grow;
        if (grow > K - 2) break;
        ++z[static_cast<std::size_t>(grow)];
        for (Index i = 0; i < grow; ++i) z[static_cast<std::size_t>(i)] = 0;
      }
    }
    best[w] = local;
  });

  detail::BestSoFar total = best[0];
  for (unsigned w = 1; w < workers; ++w) total.merge(best[w]);

  MultisetSearch out;
  out.evaluated = multiset_count(static_cast<std::uint64_t>(P), static_cast<std::uint64_t>(K));
  out.ties = total.ties;
  out.nuclear = std::sqrt(total.score);
  // Unrank the winning colex position.
  out.best.assign(static_cast<std::size_t>(K), 0);
  std::uint64_t r = total.order;
  for (Index i = K; i >= 1; --i) {
    std::uint64_t w = static_cast<std::uint64_t>(i) - 1;
    while (binomial(w + 1, static_cast<std::uint64_t>(i)) <= r) ++w;
    r -= binomial(w, static_cast<std::uint64_t>(i));
    out.best[static_cast<std::size_t>(i - 1)] = static_cast<Index>(w - static_cast<std::uint64_t>(i - 1));
  }
  return out;
}

namespace detail {

inline SolveResult finish_multi(const DataMatrix& X, const SignMatrix& B, Method method, bool exact,
                                std::uint64_t evaluated, std::uint64_t ties, double rank_tol) {
  SolveResult out;
  out.signs = canonical_sign_matrix(B);
  out.subspace = subspace_from_signs(X, out.signs, rank_tol);
  out.metric = metric_l1(X, out.subspace);
  out.method = method;
  out.exact = exact;
  out.candidates_evaluated = evaluated;
  out.ties = ties;
  return out;
}

inline SignMatrix gather_columns(const std::vector<SignVector>& cols, const std::vector<Index>& pick) {
  SignMatrix B(cols.front().size(), static_cast<Index>(pick.size()));
  for (std::size_t k = 0; k < pick.size(); ++k) B.col(static_cast<Index>(k)) = cols[static_cast<std::size_t>(pick[k])];
  return B;
}

}  // namespace detail

/// Exhaustive search over sign matrices with each column canonical and the
/// columns forming a multiset, C(2^{N-1}+K-1, K) nuclear-norm evaluations.
/// K may exceed rank(X); the surplus directions are an orthonormal padding.
inline SolveResult solve_multi_exhaustive(const DataMatrix& X, Index K, const SolveOptions& opt = {}) {
  require_finite(X, "solve_multi_exhaustive");
  if (K < 1 || K > X.rows()) throw ContractViolation("solve_multi_exhaustive: need 1 <= K <= D");
  const Index N = X.cols();
  const std::uint64_t P = canonical_sign_count(N);
  const std::uint64_t count = multiset_count(P, static_cast<std::uint64_t>(K));
  if (P == UINT64_MAX || count > opt.budget)
    throw BudgetExceeded("exhaustive search over " + std::to_string(N) + "x" + std::to_string(K) +
                         " sign matrices exceeds the budget; use the poly strategy");
  const Matrix Q = eigen_basis(X, opt.rank_tol).Q;
  std::vector<SignVector> cols;
  cols.reserve(P);
  Matrix Y(Q.cols(), static_cast<Index>(P));
  for (std::uint64_t p = 0; p < P; ++p) {
    cols.push_back(detail::signs_from_pattern(N, p));
    Y.col(static_cast<Index>(p)) = Q.transpose() * as_real(cols.back());
  }
  MultisetSearch s = best_multiset(Y, K, resolve_workers(opt.workers));
  return detail::finish_multi(X, detail::gather_columns(cols, s.best), Method::MultiExhaustive, true, s.evaluated,
                              s.ties, opt.rank_tol);
}

/// Polynomial-time exact solver: best size-K multiset of S1 under ||Q^T B||_*.
inline SolveResult solve_multi_poly(const DataMatrix& X, Index K, const SolveOptions& opt = {}) {
  EigenBasis E = eigen_basis(X, opt.rank_tol);
  if (K < 1 || K > E.rank())
    throw ContractViolation("solve_multi_poly: K = " + std::to_string(K) + " exceeds rank " + std::to_string(E.rank()));
  const unsigned workers = resolve_workers(opt.workers);
  CandidateSet S = compute_candidates(E.Q, opt.rank_tol, workers);
  Matrix Y(E.rank(), static_cast<Index>(S.size()));
  for (std::size_t i = 0; i < S.size(); ++i) Y.col(static_cast<Index>(i)) = E.Q.transpose() * as_real(S.columns[i]);
  MultisetSearch s = best_multiset(Y, K, workers);
  return detail::finish_multi(X, detail::gather_columns(S.columns, s.best), Method::MultiPoly, true, s.evaluated, s.ties,
                              opt.rank_tol);
}

/// Cost estimates for the auto strategy (K > 1).
inline double multi_exhaustive_cost(Index N, Index K) {
  return std::ldexp(1.0, static_cast<int>(std::min<Index>(N * K - 1, 1000)));
}
inline double multi_poly_cost(Index N, Index d, Index K) {
  const double P1 = static_cast<double>(candidate_count_bound(static_cast<std::uint64_t>(N), static_cast<std::uint64_t>(d)));
  double multisets = 1.0;
  for (Index i = 1; i <= K; ++i) multisets *= (P1 + static_cast<double>(i) - 1.0) / static_cast<double>(i);
  return multisets * static_cast<double>(d * K * K);
}

inline MultiStrategy auto_multi_strategy(Index N, Index d, Index K, std::uint64_t budget) {
  if (K > d) return MultiStrategy::Exhaustive;
  const std::uint64_t exhaustive_evals = multiset_count(canonical_sign_count(N), static_cast<std::uint64_t>(K));
  if (exhaustive_evals > budget) return MultiStrategy::Poly;
  return multi_exhaustive_cost(N, K) <= multi_poly_cost(N, d, K) ? MultiStrategy::Exhaustive : MultiStrategy::Poly;
}

inline SolveResult solve_multi(const DataMatrix& X, Index K, MultiStrategy strategy = MultiStrategy::Auto,
                               const SolveOptions& opt = {}) {
  if (K < 1) throw ContractViolation("solve_multi: K must be at least 1");
  if (K == 1) {
    switch (strategy) {
      case MultiStrategy::Exhaustive: return solve_exhaustive(X, opt);
      case MultiStrategy::Poly: return solve_poly(X, opt);
      case MultiStrategy::Auto: return solve(X, Strategy::Auto, opt);
    }
  }
  switch (strategy) {
    case MultiStrategy::Exhaustive: return solve_multi_exhaustive(X, K, opt);
    case MultiStrategy::Poly: return solve_multi_poly(X, K, opt);
    case MultiStrategy::Auto: break;
  }
  const Index d = compact_svd(X, opt.rank_tol).rank();
  return solve_multi(X, K, auto_multi_strategy(X.cols(), d, K, opt.budget), opt);
}

}  // namespace l1pca

#endif  // L1PCA_SOLVER_MULTI_HPP
