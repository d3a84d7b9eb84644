#ifndef L1PCA_EXPERIMENTS_DIMRED_HPP
#define L1PCA_EXPERIMENTS_DIMRED_HPP

// Line fitting under outliers: L2 versus L1 principal component of 2-D
// Gaussian training data corrupted by a displaced outlier cluster, scored by
// the mean square fit error on fresh nominal data.

#include <cmath>
#include <cstdint>
#include <vector>

#include "l1pca/experiments/rng.hpp"
#include "l1pca/numerics.hpp"
#include "l1pca/parallel.hpp"
#include "l1pca/solver_single.hpp"

namespace l1pca::experiments {

// Trials already run in parallel; each solve stays on its own thread.
inline constexpr SolveOptions kSerialSolve{.workers = 1};

inline Eigen::Matrix2d nominal_covariance() { return (Eigen::Matrix2d() << 15.0, 13.0, 13.0, 26.0).finished(); }
inline Eigen::Vector2d outlier_mean() { return {20.0, -20.0}; }
inline Eigen::Matrix2d outlier_covariance() { return (Eigen::Matrix2d() << 5.73, -4.494, -4.494, 5.27).finished(); }

/// N draws of N(mean, cov) as the columns of a D x N matrix.
inline DataMatrix gaussian_samples(const Vector& mean, const Matrix& cov, Index N, Rng& rng) {
  const Matrix L = cov.llt().matrixL();
  DataMatrix X(mean.size(), N);
  Vector z(mean.size());
  for (Index n = 0; n < N; ++n) {
    for (Index i = 0; i < z.size(); ++i) z(i) = rng.normal();
    X.col(n) = mean + L * z;
  }
  return X;
}

inline DataMatrix gen_nominal_gaussian(Index N, Rng& rng) {
  return gaussian_samples(Eigen::Vector2d::Zero(), nominal_covariance(), N, rng);
}
inline DataMatrix gen_nominal_gaussian(Index N, std::uint64_t seed) {
  Rng rng(seed);
  return gen_nominal_gaussian(N, rng);
}

inline DataMatrix gen_outliers(Index n_out, Rng& rng) {
  return gaussian_samples(outlier_mean(), outlier_covariance(), n_out, rng);
}
inline DataMatrix gen_outliers(Index n_out, std::uint64_t seed) {
  Rng rng(seed);
  return gen_outliers(n_out, rng);
}

/// Mean over columns x of ||x - R R^T x||^2.
inline double mean_square_fit_error(const Subspace& R, const DataMatrix& points) {
  if (points.rows() != R.dim()) throw std::invalid_argument("mean_square_fit_error: dimension mismatch");
  if (points.cols() == 0) return 0.0;
  const Matrix residual = points - R.basis * (R.basis.transpose() * points);
  return residual.colwise().squaredNorm().mean();
}

/// K dominant left singular vectors (the L2 principal subspace, uncentered).
inline Subspace l2_subspace(const DataMatrix& X, Index K, double rank_tol = kDefaultRankTol) {
  SvdFactors f = compact_svd(X, rank_tol);
  if (f.U.cols() >= K) return {f.U.leftCols(K)};
  return {l1pca::detail::complete_orthonormal(f.U, X.rows(), K)};
}

struct DimredConfig {
  std::uint64_t seed = 1;
  std::size_t trials = 10000;
  Index train_size = 20;
  Index eval_size = 1000;
  Index min_outliers = 0;
  Index max_outliers = 20;
  unsigned workers = 0;
};

struct DimredRow {
  Index n_out = 0;
  std::size_t trials = 0;
  double mse_l2 = 0.0;
  double mse_l1 = 0.0;
  double ci95_l2 = 0.0;  // half-width of the normal-approximation interval
  double ci95_l1 = 0.0;
  double l1_win_rate = 0.0;  // fraction of trials with mse_l1 < mse_l2
};

struct DimredTrial {
  double mse_l2;
  double mse_l1;
};

/// One corrupted training set of `train_size` points with `n_out` outliers.
inline DimredTrial dimred_trial(Index train_size, Index n_out, Index eval_size, std::uint64_t seed) {
  Rng rng(seed);
  DataMatrix X(2, train_size);
  X.leftCols(train_size - n_out) = gen_nominal_gaussian(train_size - n_out, rng);
  X.rightCols(n_out) = gen_outliers(n_out, rng);
  const DataMatrix eval = gen_nominal_gaussian(eval_size, rng);
  const Subspace r_l2 = l2_subspace(X, 1);
  const Subspace r_l1 = solve(X, Strategy::Auto, kSerialSolve).subspace;
  return {mean_square_fit_error(r_l2, eval), mean_square_fit_error(r_l1, eval)};
}

inline std::vector<DimredRow> run_dimred(const DimredConfig& cfg) {
  if (cfg.max_outliers > cfg.train_size || cfg.min_outliers < 0 || cfg.min_outliers > cfg.max_outliers)
    throw std::invalid_argument("run_dimred: outlier range must lie within [0, train_size]");
  std::vector<DimredRow> rows;
  const unsigned workers = resolve_workers(cfg.workers);
  for (Index n_out = cfg.min_outliers; n_out <= cfg.max_outliers; ++n_out) {
    std::vector<DimredTrial> trials(cfg.trials);
    run_workers(workers, [&](unsigned w) {
      const Slice s = slice_for(cfg.trials, workers, w);
      for (std::uint64_t t = s.begin; t < s.end; ++t)
        trials[t] = dimred_trial(cfg.train_size, n_out, cfg.eval_size,
                                 Rng::derive(cfg.seed, static_cast<std::uint64_t>(n_out) * 1000003u + t));
    });
    DimredRow row;
    row.n_out = n_out;
    row.trials = cfg.trials;
    double s2 = 0, s1 = 0, q2 = 0, q1 = 0;
    std::size_t wins = 0;
    for (const auto& t : trials) {
      s2 += t.mse_l2;
      s1 += t.mse_l1;
      q2 += t.mse_l2 * t.mse_l2;
      q1 += t.mse_l1 * t.mse_l1;
      wins += t.mse_l1 < t.mse_l2;
    }
    const double n = static_cast<double>(cfg.trials);
    row.mse_l2 = s2 / n;
    row.mse_l1 = s1 / n;
    if (cfg.trials > 1) {
      row.ci95_l2 = 1.96 * std::sqrt(std::max(0.0, (q2 - n * row.mse_l2 * row.mse_l2) / (n - 1)) / n);
      row.ci95_l1 = 1.96 * std::sqrt(std::max(0.0, (q1 - n * row.mse_l1 * row.mse_l1) / (n - 1)) / n);
    }
    row.l1_win_rate = static_cast<double>(wins) / n;
    rows.push_back(row);
  }
  return rows;
}

/// Single-realization illustration: 50 nominal points plus four outliers.
struct DimredIllustration {
  DataMatrix clean;
  DataMatrix corrupted;
  Vector r_l2_clean, r_l1_clean, r_l2_corrupted, r_l1_corrupted;
  double mse_l2_clean = 0, mse_l1_clean = 0, mse_l2_corrupted = 0, mse_l1_corrupted = 0;
};

inline DimredIllustration run_dimred_illustration(std::uint64_t seed, Index nominal = 50, Index outliers = 4,
                                                  Index eval_size = 1000) {
  Rng rng(seed);
  DimredIllustration out;
  out.clean = gen_nominal_gaussian(nominal, rng);
  out.corrupted.resize(2, nominal + outliers);
  out.corrupted << out.clean, gen_outliers(outliers, rng);
  const DataMatrix eval = gen_nominal_gaussian(eval_size, rng);
  const Subspace l2c = l2_subspace(out.clean, 1), l1c = solve(out.clean).subspace;
  const Subspace l2x = l2_subspace(out.corrupted, 1), l1x = solve(out.corrupted).subspace;
  out.r_l2_clean = l2c.basis.col(0);
  out.r_l1_clean = l1c.basis.col(0);
  out.r_l2_corrupted = l2x.basis.col(0);
  out.r_l1_corrupted = l1x.basis.col(0);
  out.mse_l2_clean = mean_square_fit_error(l2c, eval);
  out.mse_l1_clean = mean_square_fit_error(l1c, eval);
  out.mse_l2_corrupted = mean_square_fit_error(l2x, eval);
  out.mse_l1_corrupted = mean_square_fit_error(l1x, eval);
  return out;
}

}  // namespace l1pca::experiments

#endif  // L1PCA_EXPERIMENTS_DIMRED_HPP
