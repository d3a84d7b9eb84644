#ifndef L1PCA_HEURISTICS_HPP
#define L1PCA_HEURISTICS_HPP

// Suboptimal fixed-point iterations from the literature. They serve as
// baselines and warm starts; none of them certifies optimality.

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "l1pca/candidates.hpp"
#include "l1pca/numerics.hpp"
#include "l1pca/solver_multi.hpp"
#include "l1pca/solver_single.hpp"

namespace l1pca {

struct IterationTrace {
  std::vector<double> metrics;  // objective after each iterate, starting with the initial point
  std::size_t iterations = 0;
  bool converged = false;
};

struct HeuristicResult {
  SolveResult result;
  IterationTrace trace;
};

inline constexpr std::size_t kDefaultMaxIter = 1000;

namespace detail {

inline bool same_metric(double a, double b) { return std::abs(a - b) <= kTieTol * std::max(std::abs(a), std::abs(b)); }

// True once the metric has failed to grow for two consecutive steps.
inline bool plateaued(const std::vector<double>& m) {
  const std::size_t n = m.size();
  return n >= 3 && same_metric(m[n - 1], m[n - 2]) && same_metric(m[n - 2], m[n - 3]);
}

}  // namespace detail

/// b <- sgn(X^T X b) until b repeats, the metric ||X b||_2 plateaus, or the cap.
inline HeuristicResult fixed_point_single(const DataMatrix& X, SignVector b0, std::size_t max_iter = kDefaultMaxIter,
                                          double rank_tol = kDefaultRankTol) {
  require_finite(X, "fixed_point_single");
  if (b0.size() != X.cols()) throw std::invalid_argument("fixed_point_single: b0 has wrong length");
  if (max_iter < 1) throw std::invalid_argument("fixed_point_single: max_iter must be >= 1");
  HeuristicResult out;
  IterationTrace& tr = out.trace;
  SignVector b = std::move(b0);
  Vector y = X * as_real(b);
  tr.metrics.push_back(y.norm());
  while (tr.iterations < max_iter) {
    SignVector next = sign_of(X.transpose() * y);
    ++tr.iterations;
    const bool fixed = next == b;
    b = std::move(next);
    y = X * as_real(b);
    tr.metrics.push_back(y.norm());
    if (fixed || detail::plateaued(tr.metrics)) {
      tr.converged = true;
      break;
    }
  }
  out.result = detail::finish_single(X, b, Method::FixedPoint, false, tr.iterations, 0, rank_tol);
  return out;
}

/// Default start: b0 = sgn(q_1).
inline HeuristicResult fixed_point_single(const DataMatrix& X, std::size_t max_iter = kDefaultMaxIter,
                                          double rank_tol = kDefaultRankTol) {
  return fixed_point_single(X, sign_of(eigen_basis(X, rank_tol).Q.col(0)), max_iter, rank_tol);
}

/// Random start drawn from `seed`, for restarts.
inline HeuristicResult fixed_point_single_seeded(const DataMatrix& X, std::uint64_t seed,
                                                 std::size_t max_iter = kDefaultMaxIter,
                                                 double rank_tol = kDefaultRankTol) {
  std::mt19937_64 gen(seed);
  SignVector b0(X.cols());
  for (Index n = 0; n < b0.size(); ++n) b0(n) = (gen() >> 63) ? 1 : -1;
  return fixed_point_single(X, std::move(b0), max_iter, rank_tol);
}

/// Joint iteration B <- sgn(X^T R), R <- U V^T from the SVD of X B.
inline HeuristicResult fixed_point_multi(const DataMatrix& X, Index K, const Subspace& R0,
                                         std::size_t max_iter = kDefaultMaxIter, double rank_tol = kDefaultRankTol) {
  require_finite(X, "fixed_point_multi");
  if (R0.dim() != X.rows() || R0.components() != K) throw std::invalid_argument("fixed_point_multi: R0 has wrong shape");
  if (max_iter < 1) throw std::invalid_argument("fixed_point_multi: max_iter must be >= 1");
  HeuristicResult out;
  IterationTrace& tr = out.trace;
  Subspace R = R0;
  SignMatrix B;
  tr.metrics.push_back(metric_l1(X, R));
  while (tr.iterations < max_iter) {
    const Matrix P = X.transpose() * R.basis;
    SignMatrix next(P.rows(), P.cols());
    for (Index k = 0; k < P.cols(); ++k) next.col(k) = sign_of(P.col(k));
    ++tr.iterations;
    const bool fixed = B.size() == next.size() && next == B;
    B = std::move(next);
    R = subspace_from_signs(X, B, rank_tol);
    tr.metrics.push_back(nuclear_norm(X * as_real(B)));
    if (fixed || detail::plateaued(tr.metrics)) {
      tr.converged = true;
      break;
    }
  }
  out.result.subspace = R;
  out.result.signs = B;
  out.result.metric = metric_l1(X, R);
  out.result.method = Method::FixedPointMulti;
  out.result.exact = false;
  out.result.candidates_evaluated = tr.iterations;
  return out;
}

/// Default start: the K dominant left singular vectors of X.
inline HeuristicResult fixed_point_multi(const DataMatrix& X, Index K, std::size_t max_iter = kDefaultMaxIter,
                                         double rank_tol = kDefaultRankTol) {
  SvdFactors f = compact_svd(X, rank_tol);
  Matrix U = f.U.cols() >= K ? Matrix(f.U.leftCols(K)) : detail::complete_orthonormal(f.U, X.rows(), K);
  return fixed_point_multi(X, K, Subspace{U}, max_iter, rank_tol);
}

/// Sequential scheme: fixed_point_single on the data, deflate the found
/// direction, repeat K times.
inline SolveResult greedy_deflation(const DataMatrix& X, Index K, std::size_t max_iter = kDefaultMaxIter,
                                    double rank_tol = kDefaultRankTol) {
  require_finite(X, "greedy_deflation");
  if (K < 1 || K > X.rows()) throw ContractViolation("greedy_deflation: need 1 <= K <= D");
  if (K == 1) {
    SolveResult r = fixed_point_single(X, max_iter, rank_tol).result;
    r.method = Method::Greedy;
    return r;
  }
  Matrix R(X.rows(), K);
  Matrix residual = X;
  std::uint64_t iterations = 0;
  for (Index k = 0; k < K; ++k) {
    HeuristicResult step = fixed_point_single(residual, max_iter, rank_tol);
    iterations += step.trace.iterations;
    Vector r = step.result.component();
    for (int pass = 0; pass < 2; ++pass) r -= R.leftCols(k) * (R.leftCols(k).transpose() * r);
    R.col(k) = r.normalized();
    residual -= R.col(k) * (R.col(k).transpose() * residual);
  }
  SolveResult out;
  out.subspace.basis = R;
  const Matrix P = X.transpose() * R;
  out.signs.resize(P.rows(), P.cols());
  for (Index k = 0; k < K; ++k) out.signs.col(k) = sign_of(P.col(k));
  out.metric = metric_l1(X, out.subspace);
  out.method = Method::Greedy;
  out.exact = false;
  out.candidates_evaluated = iterations;
  return out;
}

}  // namespace l1pca

#endif  // L1PCA_HEURISTICS_HPP
