#ifndef L1PCA_CANDIDATES_HPP
#define L1PCA_CANDIDATES_HPP

// Candidate sign vectors for the single-component problem. The candidates are
// the sign patterns sgn(Q c) of the cells of the hyperplane arrangement
// {c : Q_n c = 0}, visited through the arrangement's vertices: every set of
// m-1 rows of Q fixes a vertex c as the null space of those rows, and the
// ambiguous signs at the vertex are resolved with the null spaces of the
// same rows truncated to the first m-1 columns. The cells touching the
// boundary c_m = 0 are supplied by recursing on the first m-2 columns.

#include <cstdint>
#include <functional>
#include <optional>
#include <unordered_set>
#include <vector>

#include "l1pca/numerics.hpp"
#include "l1pca/parallel.hpp"

namespace l1pca {

using SignVector = Eigen::Matrix<std::int8_t, Eigen::Dynamic, 1>;
using SignMatrix = Eigen::Matrix<std::int8_t, Eigen::Dynamic, Eigen::Dynamic>;

inline SignVector sign_of(const Vector& v) {
  SignVector b(v.size());
  for (Index n = 0; n < v.size(); ++n) b(n) = static_cast<std::int8_t>(sgn(v(n)));
  return b;
}

inline Vector as_real(const SignVector& b) { return b.cast<double>(); }
inline Matrix as_real(const SignMatrix& B) { return B.cast<double>(); }

/// Representative of {b, -b} with first entry +1.
inline SignVector canonicalize(SignVector b) {
  if (b.size() > 0 && b(0) < 0) b = -b;
  return b;
}

/// Sign pattern packed 64 entries per word (bit set for -1).
using PackedSigns = std::vector<std::uint64_t>;

inline PackedSigns pack(const SignVector& b) {
  PackedSigns words(static_cast<std::size_t>((b.size() + 63) / 64), 0);
  for (Index n = 0; n < b.size(); ++n)
    if (b(n) < 0) words[static_cast<std::size_t>(n / 64)] |= std::uint64_t{1} << (n % 64);
  return words;
}

struct PackedSignsHash {
  std::size_t operator()(const PackedSigns& w) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ull ^ w.size();
    for (std::uint64_t x : w) {
      h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      h *= 0xbf58476d1ce4e5b9ull;
    }
    return static_cast<std::size_t>(h ^ (h >> 31));
  }
};

/// Binomial coefficient saturating at UINT64_MAX.
inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > UINT64_MAX) return UINT64_MAX;
  }
  return static_cast<std::uint64_t>(r);
}

/// Number of distinct sign classes for N generic samples of rank d:
/// sum_{g=0}^{d-1} C(N-1, g).
inline std::uint64_t candidate_count_bound(std::uint64_t N, std::uint64_t d) {
  std::uint64_t total = 0;
  for (std::uint64_t g = 0; g < d; ++g) {
    const std::uint64_t term = binomial(N - 1, g);
    if (term > UINT64_MAX - total) return UINT64_MAX;
    total += term;
  }
  return total;
}

struct CandidateSet {
  std::vector<SignVector> columns;  // canonical, distinct, in emission order
  Index source_rank = 0;
  Index sample_count = 0;
  std::uint64_t vertices_visited = 0;
  std::uint64_t skipped_subsets = 0;   // dependent row subsets
  std::uint64_t unresolved_entries = 0;  // vertex signs left at sgn(Q c)
  std::uint64_t zero_rows = 0;          // rows of Q orthogonal to every direction

  std::size_t size() const noexcept { return columns.size(); }
  SignMatrix as_matrix() const {
    SignMatrix B(sample_count, static_cast<Index>(columns.size()));
    for (std::size_t i = 0; i < columns.size(); ++i) B.col(static_cast<Index>(i)) = columns[i];
    return B;
  }
};

namespace detail {

inline std::vector<std::vector<Index>> all_subsets(Index N, Index size) {
  std::vector<std::vector<Index>> out;
  if (size > N) return out;
  std::vector<Index> idx(static_cast<std::size_t>(size));
  for (Index i = 0; i < size; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    out.push_back(idx);
    Index pos = size - 1;
    while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == N - size + pos) --pos;
    if (pos < 0) break;
    ++idx[static_cast<std::size_t>(pos)];
    for (Index k = pos + 1; k < size; ++k) idx[static_cast<std::size_t>(k)] = idx[static_cast<std::size_t>(k - 1)] + 1;
  }
  return out;
}

struct VertexOutcome {
  std::optional<SignVector> signs;
  std::uint64_t unresolved = 0;
};

// One vertex of the arrangement for the rows in `rows` (|rows| = m-1).
inline VertexOutcome vertex_candidate(const Matrix& Q, const std::vector<Index>& rows, double rank_tol) {
  const Index m = Q.cols();
  Matrix sub(m - 1, m);
  for (Index r = 0; r < m - 1; ++r) sub.row(r) = Q.row(rows[static_cast<std::size_t>(r)]);
  VertexOutcome out;
  std::optional<Vector> c = null_space_vector(sub, rank_tol);
  if (!c) return out;
  if (sgn((*c)(m - 1)) < 0) *c = -*c;
  SignVector b = sign_of(Q * *c);

  Matrix reduced(m - 2, m - 1);
  for (Index j = 0; j < m - 1; ++j) {
    for (Index r = 0, k = 0; r < m - 1; ++r)
      if (r != j) reduced.row(k++) = sub.row(r).head(m - 1);
    std::optional<Vector> cr = null_space_vector(reduced, rank_tol);
    if (!cr) {
      ++out.unresolved;
      continue;
    }
    if (sgn((*cr)(m - 2)) < 0) *cr = -*cr;
    b(rows[static_cast<std::size_t>(j)]) = static_cast<std::int8_t>(sgn(sub.row(j).head(m - 1).dot(*cr)));
  }
  out.signs = std::move(b);
  return out;
}

inline void collect_candidates(const Matrix& Q, double rank_tol, unsigned workers, CandidateSet& set,
                               const std::function<void(SignVector)>& emit) {
  const Index N = Q.rows();
  const Index m = Q.cols();
  if (m > 2) {
    const auto subsets = all_subsets(N, m - 1);
    std::vector<VertexOutcome> found(subsets.size());
    run_workers(workers, [&](unsigned w) {
      const Slice s = slice_for(subsets.size(), workers, w);
      for (std::uint64_t i = s.begin; i < s.end; ++i) found[i] = vertex_candidate(Q, subsets[i], rank_tol);
    });
    for (auto& v : found) {
      ++set.vertices_visited;
      set.unresolved_entries += v.unresolved;
      if (!v.signs) {
        ++set.skipped_subsets;
        continue;
      }
      emit(std::move(*v.signs));
    }
    collect_candidates(Q.leftCols(m - 2), rank_tol, workers, set, emit);
  } else if (m == 2) {
    for (Index i = 0; i < N; ++i) {
      ++set.vertices_visited;
      std::optional<Vector> c = null_space_vector(Q.row(i), rank_tol);
      if (!c) {
        ++set.skipped_subsets;
        continue;
      }
      if (sgn((*c)(1)) < 0) *c = -*c;
      SignVector b = sign_of(Q * *c);
      b(i) = static_cast<std::int8_t>(sgn(Q(i, 0)));
      emit(std::move(b));
    }
  } else {
    emit(sign_of(Q.col(0)));
  }
}

}  // namespace detail

/// Builds the candidate set S1 for the N x m matrix Q. For generic Q the set
/// has exactly candidate_count_bound(N, m) members and contains a maximizer
/// of ||Q^T b||_2 over all sign vectors.
inline CandidateSet compute_candidates(const Matrix& Q, double rank_tol = kDefaultRankTol, unsigned workers = 1) {
  require_finite(Q, "compute_candidates");
  CandidateSet set;
  set.source_rank = Q.cols();
  set.sample_count = Q.rows();
  workers = resolve_workers(workers);

  // Rows with no weight on any direction contribute sgn(0) = +1 everywhere.
  std::vector<Index> zero_rows;
  const double scale = Q.rowwise().norm().maxCoeff();
  for (Index n = 0; n < Q.rows(); ++n)
    if (Q.row(n).norm() <= rank_tol * scale) zero_rows.push_back(n);
  set.zero_rows = zero_rows.size();

  std::unordered_set<PackedSigns, PackedSignsHash> seen;
  auto emit = [&](SignVector b) {
    b = canonicalize(std::move(b));
    for (Index n : zero_rows) b(n) = 1;
    if (seen.insert(pack(b)).second) set.columns.push_back(std::move(b));
  };
  detail::collect_candidates(Q, rank_tol, workers, set, emit);
  return set;
}

}  // namespace l1pca

#endif  // L1PCA_CANDIDATES_HPP
