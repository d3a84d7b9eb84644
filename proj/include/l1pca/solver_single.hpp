#ifndef L1PCA_SOLVER_SINGLE_HPP
#define L1PCA_SOLVER_SINGLE_HPP

// Optimal single L1-norm principal component r = argmax_{||r||=1} ||X^T r||_1.
// Every exact strategy finds b_opt = argmax_b ||X b||_2 over sign vectors and
// returns r = X b_opt / ||X b_opt||_2, which attains ||X^T r||_1 = ||X b_opt||_2.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "l1pca/candidates.hpp"
#include "l1pca/numerics.hpp"
#include "l1pca/parallel.hpp"

namespace l1pca {

enum class Method {
  Exhaustive,
  Rank1,
  Rank2,
  Poly,
  Approx,
  FixedPoint,
  Greedy,
  MultiExhaustive,
  MultiPoly,
  FixedPointMulti,
};

inline std::string_view to_string(Method m) {
  switch (m) {
    case Method::Exhaustive: return "exhaustive";
    case Method::Rank1: return "rank1";
    case Method::Rank2: return "rank2";
    case Method::Poly: return "poly";
    case Method::Approx: return "approx";
    case Method::FixedPoint: return "fixedpoint";
    case Method::Greedy: return "greedy";
    case Method::MultiExhaustive: return "multi-exhaustive";
    case Method::MultiPoly: return "multi-poly";
    case Method::FixedPointMulti: return "fixedpoint-multi";
  }
  return "unknown";
}

enum class Strategy { Auto, Exhaustive, Rank1, Rank2, Poly, Approx };

struct SolveOptions {
  double rank_tol = kDefaultRankTol;
  std::uint64_t budget = std::uint64_t{1} << 24;  // max metric evaluations for exhaustive search
  unsigned workers = 0;                           // 0: all hardware threads
};

struct SolveResult {
  Subspace subspace;
  SignMatrix signs;  // N x K, canonical
  double metric = 0.0;
  Method method = Method::Exhaustive;
  bool exact = true;
  std::uint64_t candidates_evaluated = 0;
  std::uint64_t ties = 0;  // other candidates within 1e-12 of the winner

  SignVector sign_vector() const { return signs.col(0); }
  Vector component() const { return subspace.basis.col(0); }
};

/// ||X^T R||_1, the sum of absolute projections.
inline double metric_l1(const DataMatrix& X, const Subspace& R) {
  if (X.rows() != R.basis.rows()) throw std::invalid_argument("metric_l1: dimension mismatch");
  return (X.transpose() * R.basis).cwiseAbs().sum();
}

namespace detail {

inline constexpr double kTieTol = 1e-12;

// Running argmax with first-in-order tie breaking. `order` is the position of
// the candidate in the enumeration; scores are squared metrics.
struct BestSoFar {
  double score = -1.0;
  std::uint64_t order = UINT64_MAX;
  std::uint64_t ties = 0;

  void offer(double s, std::uint64_t pos) {
    if (s > score * (1.0 + 2 * kTieTol)) {
      score = s;
      order = pos;
      ties = 0;
    } else if (s >= score * (1.0 - 2 * kTieTol)) {
      ++ties;
      score = std::max(score, s);
      order = std::min(order, pos);
    }
  }
  void merge(const BestSoFar& other) {
    if (other.order == UINT64_MAX) return;
    if (other.score > score * (1.0 + 2 * kTieTol)) {
      *this = other;
    } else if (other.score >= score * (1.0 - 2 * kTieTol)) {
      ties += other.ties + 1;
      score = std::max(score, other.score);
      order = std::min(order, other.order);
    }
  }
};

inline Vector leading_left_vector(const DataMatrix& X, double rank_tol) {
  return compact_svd(X, rank_tol).U.col(0);
}

inline SolveResult finish_single(const DataMatrix& X, SignVector b, Method method, bool exact,
                                 std::uint64_t evaluated, std::uint64_t ties, double rank_tol) {
  b = canonicalize(std::move(b));
  Vector y = X * as_real(b);
  const double norm = y.norm();
  SolveResult out;
  out.subspace.basis = norm > 0.0 ? Matrix(y / norm) : Matrix(leading_left_vector(X, rank_tol));
  out.signs = b;
  out.method = method;
  out.exact = exact;
  out.candidates_evaluated = evaluated;
  out.ties = ties;
  out.metric = metric_l1(X, out.subspace);
  return out;
}

// Canonical sign vector for enumeration position p: entries 2..N read as the
// bits of p from most to least significant, set bit = -1.
inline SignVector signs_from_pattern(Index N, std::uint64_t p) {
  SignVector b = SignVector::Ones(N);
  for (Index n = 1; n < N; ++n)
    if ((p >> (N - 1 - n)) & 1u) b(n) = -1;
  return b;
}

}  // namespace detail

/// Number of canonical sign vectors of length N, or UINT64_MAX if it overflows.
inline std::uint64_t canonical_sign_count(Index N) {
  return N - 1 >= 64 ? UINT64_MAX : std::uint64_t{1} << (N - 1);
}

/// Exhaustive search over the 2^{N-1} canonical sign vectors (b_1 = +1),
/// visited in Gray-code order with O(d) metric updates per step.
inline SolveResult solve_exhaustive(const DataMatrix& X, const SolveOptions& opt = {}) {
  require_finite(X, "solve_exhaustive");
  const Index N = X.cols();
  const std::uint64_t count = canonical_sign_count(N);
  if (N - 1 >= 63 || count > opt.budget)
    throw BudgetExceeded("exhaustive search over 2^" + std::to_string(N - 1) +
                         " sign vectors exceeds the budget; use the poly strategy");
  const Matrix G = eigen_basis(X, opt.rank_tol).Q.transpose();  // d x N, ||G b|| = ||X b||
  const unsigned workers = static_cast<unsigned>(std::min<std::uint64_t>(resolve_workers(opt.workers), count));
  std::vector<detail::BestSoFar> best(workers);

  run_workers(workers, [&](unsigned w) {
    const Slice s = slice_for(count, workers, w);
    if (s.begin == s.end) return;
    auto gray = [](std::uint64_t k) { return k ^ (k >> 1); };
    Vector b = as_real(detail::signs_from_pattern(N, gray(s.begin)));
    Vector v = G * b;
    detail::BestSoFar local;
    for (std::uint64_t k = s.begin; k < s.end; ++k) {
      local.offer(v.squaredNorm(), gray(k));
      if (k + 1 == s.end) break;
      const int bit = std::countr_zero(k + 1);
      const Index n = N - 1 - bit;
      v.noalias() -= (2.0 * b(n)) * G.col(n);
      b(n) = -b(n);
      if (((k + 1) & 0xfff) == 0) v.noalias() = G * b;
    }
    best[w] = local;
  });
  detail::BestSoFar total = best[0];
  for (unsigned w = 1; w < workers; ++w) total.merge(best[w]);
  return detail::finish_single(X, detail::signs_from_pattern(N, total.order), Method::Exhaustive, true, count,
                               total.ties, opt.rank_tol);
}

/// Rank-one data: b_opt = sgn(q_1), O(N).
inline SolveResult solve_rank1(const DataMatrix& X, const SolveOptions& opt = {}) {
  EigenBasis E = eigen_basis(X, opt.rank_tol);
  if (E.rank() != 1) throw ContractViolation("solve_rank1: numerical rank is " + std::to_string(E.rank()) + ", not 1");
  return detail::finish_single(X, sign_of(E.Q.col(0)), Method::Rank1, true, 1, 0, opt.rank_tol);
}

/// Any rank: quantize the dominant eigenvector of X^T X. Approximate unless
/// rank(X) = 1.
inline SolveResult solve_rank1_approx(const DataMatrix& X, const SolveOptions& opt = {}) {
  EigenBasis E = eigen_basis(X, opt.rank_tol);
  return detail::finish_single(X, sign_of(E.Q.col(0)), Method::Approx, false, 1, 0, opt.rank_tol);
}

/// Rank-two data: walk the N sign changes of sgn(q1 cos(phi) + q2 sin(phi))
/// over phi in [-pi/2, pi/2) in sorted order, updating Q^T b incrementally.
inline SolveResult solve_rank2(const DataMatrix& X, const SolveOptions& opt = {}) {
  EigenBasis E = eigen_basis(X, opt.rank_tol);
  if (E.rank() != 2) throw ContractViolation("solve_rank2: numerical rank is " + std::to_string(E.rank()) + ", not 2");
  const Matrix& Q = E.Q;
  const Index N = Q.rows();

  // Start just after phi = -pi/2, where the value is q1 * eps - q2.
  SignVector b(N);
  std::vector<std::pair<double, Index>> crossings;
  crossings.reserve(static_cast<std::size_t>(N));
  for (Index n = 0; n < N; ++n) {
    const double q1 = Q(n, 0);
    const double q2 = Q(n, 1);
    if (q2 != 0.0) {
      b(n) = static_cast<std::int8_t>(sgn(-q2));
      crossings.emplace_back(std::atan(-q1 / q2), n);
    } else {
      b(n) = static_cast<std::int8_t>(sgn(q1));
    }
  }
  std::sort(crossings.begin(), crossings.end());

  Eigen::Vector2d v = Q.transpose() * as_real(b);
  detail::BestSoFar best;
  std::uint64_t evaluated = 0;
  std::vector<Index> flips;  // entry flipped before evaluation i
  best.offer(v.squaredNorm(), evaluated++);
  const std::size_t last = crossings.size() == static_cast<std::size_t>(N) ? crossings.size() - 1 : crossings.size();
  for (std::size_t i = 0; i < last; ++i) {
    const Index n = crossings[i].second;
    v -= (2.0 * b(n)) * Q.row(n).transpose();
    b(n) = static_cast<std::int8_t>(-b(n));
    flips.push_back(n);
    best.offer(v.squaredNorm(), evaluated++);
  }
  // Replay to the winning position.
  for (std::size_t i = flips.size(); i-- > best.order;) b(flips[i]) = static_cast<std::int8_t>(-b(flips[i]));
  return detail::finish_single(X, b, Method::Rank2, true, evaluated, best.ties, opt.rank_tol);
}

/// Polynomial-time exact solver: score every member of S1 by ||Q^T b||_2.
inline SolveResult solve_poly(const DataMatrix& X, const SolveOptions& opt = {}) {
  EigenBasis E = eigen_basis(X, opt.rank_tol);
  const unsigned workers = resolve_workers(opt.workers);
  CandidateSet S = compute_candidates(E.Q, opt.rank_tol, workers);
  const Matrix G = E.Q.transpose();
  std::vector<detail::BestSoFar> best(workers);
  run_workers(workers, [&](unsigned w) {
    const Slice s = slice_for(S.size(), workers, w);
    detail::BestSoFar local;
    for (std::uint64_t i = s.begin; i < s.end; ++i) local.offer((G * as_real(S.columns[i])).squaredNorm(), i);
    best[w] = local;
  });
  detail::BestSoFar total = best[0];
  for (unsigned w = 1; w < workers; ++w) total.merge(best[w]);
  return detail::finish_single(X, S.columns[total.order], Method::Poly, true, S.size(), total.ties, opt.rank_tol);
}

/// Relative cost estimates used by the auto strategy: exhaustive search pays
/// O(d) per canonical sign vector, the candidate method O(N) per member of S1.
inline double exhaustive_cost(Index N, Index d) {
  return std::ldexp(1.0, static_cast<int>(N - 1)) * static_cast<double>(d);
}
inline double poly_cost(Index N, Index d) {
  return static_cast<double>(candidate_count_bound(N, d)) * static_cast<double>(N);
}

/// Strategy picked by the auto dispatcher for an N-sample rank-d matrix.
inline Strategy auto_strategy(Index N, Index d) {
  if (d == 1) return Strategy::Rank1;
  if (d == 2) return Strategy::Rank2;
  return exhaustive_cost(N, d) <= poly_cost(N, d) ? Strategy::Exhaustive : Strategy::Poly;
}

inline SolveResult solve(const DataMatrix& X, Strategy strategy = Strategy::Auto, const SolveOptions& opt = {}) {
  switch (strategy) {
    case Strategy::Exhaustive: return solve_exhaustive(X, opt);
    case Strategy::Rank1: return solve_rank1(X, opt);
    case Strategy::Rank2: return solve_rank2(X, opt);
    case Strategy::Poly: return solve_poly(X, opt);
    case Strategy::Approx: return solve_rank1_approx(X, opt);
    case Strategy::Auto: break;
  }
  const Index d = compact_svd(X, opt.rank_tol).rank();
  return solve(X, auto_strategy(X.cols(), d), opt);
}

}  // namespace l1pca

#endif  // L1PCA_SOLVER_SINGLE_HPP
