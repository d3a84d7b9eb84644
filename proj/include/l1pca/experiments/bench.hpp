#ifndef L1PCA_EXPERIMENTS_BENCH_HPP
#define L1PCA_EXPERIMENTS_BENCH_HPP

// Wall-clock timing of the K=2 candidate solver on full-rank d x N Gaussian
// matrices over a reference (d, N) grid, next to reference CPU times.

#include <chrono>
#include <cstdint>
#include <optional>
#include <vector>

#include "l1pca/experiments/rng.hpp"
#include "l1pca/solver_multi.hpp"

namespace l1pca::experiments {

struct BenchCell {
  Index d = 0;
  Index N = 0;
  double reference_seconds = 0.0;  // serial reference timing
};

/// The reference grid: d = 3..6, N = 4..14 even, d < N.
inline std::vector<BenchCell> reference_grid() {
  const double times[4][6] = {{0.0172, 0.0406, 0.0920, 0.1966, 0.3900, 0.7160},
                              {0, 0.0624, 0.3526, 1.4212, 4.5178, 11.8686},
                              {0, 0.1014, 0.8471, 5.4944, 26.3361, 99.4600},
                              {0, 0, 1.2308, 12.2289, 87.1546, 471.2275}};
  std::vector<BenchCell> grid;
  for (Index d = 3; d <= 6; ++d)
    for (Index j = 0; j < 6; ++j) {
      const Index N = 4 + 2 * j;
      if (N > d) grid.push_back({d, N, times[d - 3][j]});
    }
  return grid;
}

inline DataMatrix bench_matrix(Index d, Index N, std::uint64_t seed) {
  Rng rng(seed);
  DataMatrix X(d, N);
  for (Index j = 0; j < N; ++j)
    for (Index i = 0; i < d; ++i) X(i, j) = rng.normal();
  return X;
}

struct BenchTiming {
  double seconds = 0.0;  // mean wall time per solve
  std::uint64_t candidates = 0;
  double metric = 0.0;
};

/// Mean wall time of solve_multi_poly over `repeats` matrices seeded seed..seed+repeats-1.
inline BenchTiming time_cell(Index d, Index N, Index K, unsigned workers, std::size_t repeats, std::uint64_t seed) {
  BenchTiming t;
  const SolveOptions opt{.workers = workers};
  double total = 0.0;
  for (std::size_t r = 0; r < repeats; ++r) {
    const DataMatrix X = bench_matrix(d, N, seed + r);
    const auto start = std::chrono::steady_clock::now();
    const SolveResult res = solve_multi_poly(X, K, opt);
    total += std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    t.candidates = res.candidates_evaluated;
    t.metric = res.metric;
  }
  t.seconds = total / static_cast<double>(repeats);
  return t;
}

}  // namespace l1pca::experiments

#endif  // L1PCA_EXPERIMENTS_BENCH_HPP
