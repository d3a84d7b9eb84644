#ifndef L1PCA_TESTS_ORACLES_HPP
#define L1PCA_TESTS_ORACLES_HPP

// Reference implementations for the tests. They share nothing with the
// library beyond Eigen and are deliberately naive.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <set>
#include <vector>

namespace oracle {

using Eigen::MatrixXd;
using Eigen::VectorXd;

inline MatrixXd gaussian(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd;
  MatrixXd M(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) M(i, j) = nd(gen);
  return M;
}

/// D x N product of Gaussian factors, rank d almost surely.
inline MatrixXd low_rank(Eigen::Index D, Eigen::Index N, Eigen::Index d, std::uint64_t seed) {
  return gaussian(D, d, seed) * gaussian(d, N, seed ^ 0x5bd1e995u);
}

inline VectorXd signs_of_mask(Eigen::Index N, std::uint64_t mask) {
  VectorXd b(N);
  for (Eigen::Index n = 0; n < N; ++n) b(n) = (mask >> n) & 1u ? -1.0 : 1.0;
  return b;
}

/// max over all 2^N sign vectors of ||X b||_2.
inline double best_single(const MatrixXd& X) {
  const Eigen::Index N = X.cols();
  double best = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << N); ++mask)
    best = std::max(best, (X * signs_of_mask(N, mask)).norm());
  return best;
}

/// Every sign vector attaining best_single within a relative 1e-9.
inline std::vector<VectorXd> single_maximizers(const MatrixXd& X) {
  const Eigen::Index N = X.cols();
  const double best = best_single(X);
  std::vector<VectorXd> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << N); ++mask) {
    VectorXd b = signs_of_mask(N, mask);
    if ((X * b).norm() >= best * (1 - 1e-9)) out.push_back(b);
  }
  return out;
}

inline double nuclear(const MatrixXd& M) { return Eigen::JacobiSVD<MatrixXd>(M).singularValues().sum(); }

/// max over all 2^{NK} sign matrices of ||X B||_*.
inline double best_multi(const MatrixXd& X, Eigen::Index K) {
  const Eigen::Index N = X.cols();
  const std::uint64_t total = std::uint64_t{1} << (N * K);
  double best = 0.0;
  MatrixXd B(N, K);
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    for (Eigen::Index k = 0; k < K; ++k) B.col(k) = signs_of_mask(N, mask >> (k * N));
    best = std::max(best, nuclear(X * B));
  }
  return best;
}

/// Dense sweep of sum_n |x_n . r| over unit r in the plane; a lower bound on
/// the L1 optimum that approaches it as the grid refines.
inline double sweep_l1_plane(const MatrixXd& X, int steps) {
  double best = 0.0;
  for (int i = 0; i < steps; ++i) {
    const double t = std::numbers::pi * i / steps;
    Eigen::Vector2d r(std::cos(t), std::sin(t));
    best = std::max(best, (X.transpose() * r).cwiseAbs().sum());
  }
  return best;
}

/// Sign patterns sgn(Q c) met by random directions c, with the first entry
/// normalised to +1. Every cell of the arrangement with non-negligible solid
/// angle shows up for a large enough sample.
inline std::set<std::vector<int>> sampled_cells(const MatrixXd& Q, int samples, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd;
  std::set<std::vector<int>> out;
  VectorXd c(Q.cols());
  for (int s = 0; s < samples; ++s) {
    for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = nd(gen);
    const VectorXd y = Q * c;
    std::vector<int> b(static_cast<std::size_t>(y.size()));
    const int flip = y(0) >= 0 ? 1 : -1;
    for (Eigen::Index n = 0; n < y.size(); ++n) b[static_cast<std::size_t>(n)] = flip * (y(n) >= 0 ? 1 : -1);
    out.insert(b);
  }
  return out;
}

/// Number of regions cut from R^d by N generic central hyperplanes, halved
/// for the +-c symmetry.
inline std::uint64_t central_arrangement_cells_half(int N, int d) {
  auto choose = [](int n, int k) {
    double r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return static_cast<std::uint64_t>(std::llround(r));
  };
  std::uint64_t total = 0;
  for (int g = 0; g < d; ++g) total += choose(N - 1, g);
  return total;
}

}  // namespace oracle

#endif  // L1PCA_TESTS_ORACLES_HPP
