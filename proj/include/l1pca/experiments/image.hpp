#ifndef L1PCA_EXPERIMENTS_IMAGE_HPP
#define L1PCA_EXPERIMENTS_IMAGE_HPP

// Rank-2 reconstruction of an image from ten copies with noise-occluded
// tiles. Columns of M are the vectorized copies (column-major pixels).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "l1pca/errors.hpp"
#include "l1pca/experiments/dimred.hpp"
#include "l1pca/experiments/rng.hpp"
#include "l1pca/io.hpp"
#include "l1pca/solver_multi.hpp"

namespace l1pca::experiments {

inline constexpr Index kTileGrid = 4;

/// Deterministic 100x64 test picture: shaded background, a disc, a bar and
/// a checkered patch, so every tile carries some structure.
inline io::GrayImage synthetic_test_image(Index rows = 100, Index cols = 64) {
  io::GrayImage img{rows, cols, std::vector<std::uint8_t>(static_cast<std::size_t>(rows * cols))};
  const double cy = 0.42 * static_cast<double>(rows), cx = 0.5 * static_cast<double>(cols);
  const double radius = 0.3 * static_cast<double>(cols);
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) {
      const double y = static_cast<double>(r), x = static_cast<double>(c);
      double v = 40.0 + 120.0 * y / static_cast<double>(rows) + 30.0 * std::sin(x / 6.0);
      const double dist = std::hypot(y - cy, x - cx);
      if (dist < radius) v = 210.0 - 60.0 * dist / radius;
      if (std::abs(y - 0.8 * static_cast<double>(rows)) < 4.0 && x > 8.0 && x < static_cast<double>(cols) - 8.0) v = 20.0;
      if (y < 18.0 && x < 20.0) v = ((r / 4 + c / 4) % 2) ? 235.0 : 90.0;
      img.at(r, c) = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
    }
  }
  return img;
}

/// Replaces `tiles` distinct tiles of the 4x4 grid with uniform noise over {0..255}.
inline io::GrayImage occlude_image(const io::GrayImage& img, Index tiles, std::uint64_t seed,
                                   std::vector<Index>* chosen = nullptr) {
  if (img.rows % kTileGrid != 0 || img.cols % kTileGrid != 0 || img.rows == 0 || img.cols == 0)
    throw ContractViolation("occlude_image: image dimensions must be divisible by the 4x4 tile grid");
  if (tiles < 0 || tiles > kTileGrid * kTileGrid) throw std::invalid_argument("occlude_image: tile count out of range");
  Rng rng(seed);
  std::vector<Index> order(static_cast<std::size_t>(kTileGrid * kTileGrid));
  std::iota(order.begin(), order.end(), Index{0});
  for (std::size_t i = 0; i < static_cast<std::size_t>(tiles); ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(order.size() - i));
    std::swap(order[i], order[j]);
  }
  order.resize(static_cast<std::size_t>(tiles));
  std::sort(order.begin(), order.end());
  const Index th = img.rows / kTileGrid, tw = img.cols / kTileGrid;
  io::GrayImage out = img;
  for (Index t : order) {
    const Index r0 = (t / kTileGrid) * th, c0 = (t % kTileGrid) * tw;
    for (Index r = r0; r < r0 + th; ++r)
      for (Index c = c0; c < c0 + tw; ++c) out.at(r, c) = static_cast<std::uint8_t>(rng.below(256));
  }
  if (chosen) *chosen = std::move(order);
  return out;
}

/// Column-major vectorization, matching vec().
inline Vector vectorize(const io::GrayImage& img) {
  Vector v(img.rows * img.cols);
  for (Index c = 0; c < img.cols; ++c)
    for (Index r = 0; r < img.rows; ++r) v(c * img.rows + r) = img.at(r, c);
  return v;
}

/// Rounds and clamps to 8 bits.
inline io::GrayImage devectorize(const Vector& v, Index rows, Index cols) {
  if (v.size() != rows * cols) throw std::invalid_argument("devectorize: size mismatch");
  io::GrayImage img{rows, cols, std::vector<std::uint8_t>(static_cast<std::size_t>(rows * cols))};
  for (Index c = 0; c < cols; ++c)
    for (Index r = 0; r < rows; ++r)
      img.at(r, c) = static_cast<std::uint8_t>(std::clamp(std::lround(v(c * rows + r)), 0L, 255L));
  return img;
}

struct ImageConfig {
  std::uint64_t seed = 1;
  Index instances = 10;
  Index tiles = 3;
  Index components = 2;
};

struct ImageReport {
  std::vector<io::GrayImage> occluded;
  std::vector<std::vector<Index>> occluded_tiles;
  Subspace l2;
  SolveResult l1;
  Matrix recon_l2;  // pixels x instances, unclamped
  Matrix recon_l1;
  double mae_l2 = 0.0;  // mean |recon - clean| over all pixels of all instances
  double mae_l1 = 0.0;
  double mse_l2 = 0.0;
  double mse_l1 = 0.0;
  double mae_occluded_l2 = 0.0;  // restricted to replaced pixels; 0 when nothing was occluded
  double mae_occluded_l1 = 0.0;
};

inline ImageReport run_image(const ImageConfig& cfg, const io::GrayImage& img, const SolveOptions& opt = {}) {
  if (cfg.instances < 1) throw std::invalid_argument("run_image: need at least one instance");
  ImageReport rep;
  const Index P = img.rows * img.cols;
  const Vector clean = vectorize(img);
  DataMatrix M(P, cfg.instances);
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> mask(P, cfg.instances);
  mask.setConstant(false);
  const Index th = img.rows / kTileGrid, tw = img.cols / kTileGrid;
  for (Index i = 0; i < cfg.instances; ++i) {
    std::vector<Index> tiles;
    rep.occluded.push_back(occlude_image(img, cfg.tiles, Rng::derive(cfg.seed, static_cast<std::uint64_t>(i)), &tiles));
    M.col(i) = vectorize(rep.occluded.back());
    for (Index t : tiles) {
      const Index r0 = (t / kTileGrid) * th, c0 = (t % kTileGrid) * tw;
      for (Index c = c0; c < c0 + tw; ++c) mask.col(i).segment(c * img.rows + r0, th).setConstant(true);
    }
    rep.occluded_tiles.push_back(std::move(tiles));
  }
  rep.l2 = l2_subspace(M, cfg.components, opt.rank_tol);
  rep.l1 = solve_multi(M, cfg.components, MultiStrategy::Auto, opt);
  rep.recon_l2 = rep.l2.basis * (rep.l2.basis.transpose() * M);
  rep.recon_l1 = rep.l1.subspace.basis * (rep.l1.subspace.basis.transpose() * M);
  const Matrix err_l2 = (rep.recon_l2.colwise() - clean).cwiseAbs();
  const Matrix err_l1 = (rep.recon_l1.colwise() - clean).cwiseAbs();
  rep.mae_l2 = err_l2.mean();
  rep.mae_l1 = err_l1.mean();
  rep.mse_l2 = err_l2.array().square().mean();
  rep.mse_l1 = err_l1.array().square().mean();
  const Index hits = mask.count();
  if (hits > 0) {
    rep.mae_occluded_l2 = mask.select(err_l2.array(), 0.0).sum() / static_cast<double>(hits);
    rep.mae_occluded_l1 = mask.select(err_l1.array(), 0.0).sum() / static_cast<double>(hits);
  }
  return rep;
}

}  // namespace l1pca::experiments

#endif  // L1PCA_EXPERIMENTS_IMAGE_HPP
