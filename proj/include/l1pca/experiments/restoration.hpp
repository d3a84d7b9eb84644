#ifndef L1PCA_EXPERIMENTS_RESTORATION_HPP
#define L1PCA_EXPERIMENTS_RESTORATION_HPP

// Restoring a rank-2 5x8 measurement matrix in which six entries of two
// samples were overwritten, by projecting onto the K=2 L2 or L1 subspace.
// The fixtures are fixed reference values; the run is deterministic.

#include "l1pca/experiments/dimred.hpp"
#include "l1pca/numerics.hpp"
#include "l1pca/solver_multi.hpp"

namespace l1pca::experiments {

inline Matrix restoration_clean() {
  Matrix X(5, 8);
  X << 2.0724, -1.2024, 1.2956, 2.8719, 1.5637, -2.9323, -3.1792, -1.4152,  //
      -0.5233, 0.2595, -0.3298, -0.7562, -0.4087, 0.7973, 0.8235, 0.4155,   //
      0.0185, -0.8158, -0.0367, -0.5406, -0.2380, 1.0108, 0.3502, 1.0487,   //
      -0.6424, 0.1476, -0.4151, -1.0486, -0.5552, 1.1989, 1.0913, 0.7355,   //
      -2.1289, 2.2734, -1.2687, -2.2200, -1.2814, 1.6751, 2.7777, 0.0851;
  return X;
}

inline Matrix restoration_corrupted() {
  Matrix X(5, 8);
  X << 2.0724, 8.9538, 1.2956, 2.8719, 10.6817, -2.9323, -3.1792, -1.4152,  //
      -0.5233, 10.6187, -0.3298, -0.7562, 11.0235, 0.7973, 0.8235, 0.4155,  //
      0.0185, 11.3050, -0.0367, -0.5406, -0.2380, 1.0108, 0.3502, 1.0487,   //
      -0.6424, 0.1476, -0.4151, -1.0486, 7.8846, 1.1989, 1.0913, 0.7355,    //
      -2.1289, 2.2734, -1.2687, -2.2200, -1.2814, 1.6751, 2.7777, 0.0851;
  return X;
}

/// Reference projection onto the K=2 L2 subspace (4 decimals).
inline Matrix restoration_reference_l2() {
  Matrix X(5, 8);
  X << 0.8029, 8.2311, 0.4919, 0.9945, 11.8445, -0.9197, -1.1528, -0.3268,  //
      0.4839, 11.0891, 0.2888, 0.5096, 10.2500, -0.3897, -0.6347, -0.0285,  //
      -0.5922, 11.1679, -0.3843, -0.9862, 0.0165, 1.1412, 1.0192, 0.7148,   //
      0.6521, 0.8969, 0.4067, 0.8926, 6.6810, -0.9024, -0.9930, -0.4245,    //
      -0.3868, 2.8347, -0.2455, -0.5789, -2.2540, 0.6257, 0.6220, 0.3444;
  return X;
}

/// Reference projection onto the K=2 L1 subspace (4 decimals).
inline Matrix restoration_reference_l1() {
  Matrix X(5, 8);
  X << 2.0724, -0.0303, 1.2956, 2.8719, 2.9321, -2.9323, -3.1792, -1.4152,  //
      -0.5233, 0.1880, -0.3298, -0.7562, -0.7283, 0.7973, 0.8235, 0.4155,   //
      0.0185, 3.2915, -0.0367, -0.5406, 0.2476, 1.0108, 0.3502, 1.0487,     //
      -0.6424, 0.9300, -0.4151, -1.0486, -0.8469, 1.1989, 1.0913, 0.7355,   //
      -2.1289, -4.2139, -1.2687, -2.2200, -3.2976, 1.6751, 2.7777, 0.0851;
  return X;
}

inline constexpr double kRestorationTolerance = 5e-4;

struct RestorationReport {
  SolveResult l1;
  Subspace l2;
  Matrix restored_l2;
  Matrix restored_l1;
  Matrix sq_error_l2;  // element-wise squared restoration error against the clean data
  Matrix sq_error_l1;
  Vector per_sample_l2;  // column sums of the element-wise errors
  Vector per_sample_l1;
  double max_dev_l2 = 0.0;  // max |restored - reference|
  double max_dev_l1 = 0.0;

  bool matches_reference(double tol = kRestorationTolerance) const { return max_dev_l2 <= tol && max_dev_l1 <= tol; }
};

inline RestorationReport run_restoration(const SolveOptions& opt = {}) {
  const Matrix clean = restoration_clean();
  const Matrix corrupted = restoration_corrupted();
  RestorationReport r;
  r.l2 = l2_subspace(corrupted, 2, opt.rank_tol);
  r.l1 = solve_multi(corrupted, 2, MultiStrategy::Auto, opt);
  r.restored_l2 = r.l2.projector() * corrupted;
  r.restored_l1 = r.l1.subspace.projector() * corrupted;
  r.sq_error_l2 = (r.restored_l2 - clean).array().square().matrix();
  r.sq_error_l1 = (r.restored_l1 - clean).array().square().matrix();
  r.per_sample_l2 = r.sq_error_l2.colwise().sum().transpose();
  r.per_sample_l1 = r.sq_error_l1.colwise().sum().transpose();
  r.max_dev_l2 = (r.restored_l2 - restoration_reference_l2()).cwiseAbs().maxCoeff();
  r.max_dev_l1 = (r.restored_l1 - restoration_reference_l1()).cwiseAbs().maxCoeff();
  return r;
}

}  // namespace l1pca::experiments

#endif  // L1PCA_EXPERIMENTS_RESTORATION_HPP
