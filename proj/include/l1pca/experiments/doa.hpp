#ifndef L1PCA_EXPERIMENTS_DOA_HPP
#define L1PCA_EXPERIMENTS_DOA_HPP

// Direction-of-arrival estimation with a uniform linear array: MUSIC spectra
// from the K=2 L2 and L1 subspaces of real-lifted snapshots, one of which is
// hit by a jammer.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include "l1pca/experiments/dimred.hpp"
#include "l1pca/experiments/rng.hpp"
#include "l1pca/numerics.hpp"
#include "l1pca/solver_multi.hpp"

namespace l1pca::experiments {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

inline double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline double rad2deg(double rad) { return rad * 180.0 / std::numbers::pi; }

/// Half-wavelength ULA response [exp(j pi k sin(theta))], k = 0..D-1.
inline ComplexVector steering_vector(double theta, Index D) {
  ComplexVector s(D);
  for (Index k = 0; k < D; ++k) s(k) = std::polar(1.0, std::numbers::pi * static_cast<double>(k) * std::sin(theta));
  return s;
}

/// Real part stacked over imaginary part: D x N complex -> 2D x N real.
inline DataMatrix lift_complex(const ComplexMatrix& M) {
  DataMatrix out(2 * M.rows(), M.cols());
  out.topRows(M.rows()) = M.real();
  out.bottomRows(M.rows()) = M.imag();
  return out;
}

struct SpectrumTable {
  std::vector<double> angles;  // radians, strictly increasing
  std::vector<double> values;
  std::size_t clamped = 0;  // grid points whose residual was below the floor
};

/// Uniform grid over (-pi/2, pi/2) excluding the endpoints.
inline std::vector<double> angle_grid(double step_deg) {
  std::vector<double> grid;
  const long half = static_cast<long>(std::ceil(90.0 / step_deg)) - 1;
  for (long i = -half; i <= half; ++i) grid.push_back(deg2rad(static_cast<double>(i) * step_deg));
  return grid;
}

inline constexpr double kMusicFloor = 1e-12;

/// P(theta) = 1 / (s~^T (I - R R^T) s~) with s~ the lifted steering vector.
inline SpectrumTable music_spectrum(const Subspace& R, const std::vector<double>& grid) {
  if (R.dim() % 2 != 0) throw std::invalid_argument("music_spectrum: subspace must live in the real-lifted space");
  const Index D = R.dim() / 2;
  SpectrumTable t;
  t.angles = grid;
  t.values.reserve(grid.size());
  for (double theta : grid) {
    const ComplexVector s = steering_vector(theta, D);
    Vector lifted(2 * D);
    lifted << s.real(), s.imag();
    double residual = lifted.squaredNorm() - (R.basis.transpose() * lifted).squaredNorm();
    if (residual < kMusicFloor) {
      residual = kMusicFloor;
      ++t.clamped;
    }
    t.values.push_back(1.0 / residual);
  }
  return t;
}

/// Value at the grid point nearest to theta.
inline double spectrum_at(const SpectrumTable& t, double theta) {
  const auto it = std::lower_bound(t.angles.begin(), t.angles.end(), theta);
  std::size_t i = static_cast<std::size_t>(it - t.angles.begin());
  if (i == t.angles.size() || (i > 0 && theta - t.angles[i - 1] < t.angles[i] - theta)) --i;
  return t.values[i];
}

/// Angles of the `count` highest local maxima, highest first.
inline std::vector<double> spectrum_peaks(const SpectrumTable& t, std::size_t count) {
  std::vector<std::size_t> idx;
  const std::size_t n = t.values.size();
  for (std::size_t i = 0; i < n; ++i) {
    const bool left = i == 0 || t.values[i] > t.values[i - 1];
    const bool right = i + 1 == n || t.values[i] >= t.values[i + 1];
    if (left && right) idx.push_back(i);
  }
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return t.values[a] > t.values[b]; });
  std::vector<double> out;
  for (std::size_t i = 0; i < std::min(count, idx.size()); ++i) out.push_back(t.angles[idx[i]]);
  return out;
}

enum class SnapshotModel {
  RandomSign,   // each source amplitude carries an independent +-1 per snapshot
  RandomPhase,  // each source amplitude carries an independent uniform phase per snapshot
  Constant,     // x_n = A1 s1 + A2 s2 + n_n with fixed real amplitudes
};

struct DoaConfig {
  std::uint64_t seed = 1;
  Index sensors = 5;
  Index snapshots = 10;
  double theta1_deg = -30.0;
  double theta2_deg = 50.0;
  double jammer_deg = 20.0;
  double snr1_db = 2.0;
  double snr2_db = 3.0;
  double noise_variance = 1.0;
  double grid_step_deg = 0.1;
  SnapshotModel model = SnapshotModel::RandomSign;
  unsigned workers = 1;
};

struct DoaReport {
  ComplexMatrix snapshots;  // corrupted, sensors x snapshots
  Index jammed_snapshot = 0;
  Subspace l2;
  SolveResult l1;
  SpectrumTable spectrum_l2;
  SpectrumTable spectrum_l1;
};

/// Amplitude for a given SNR in dB over noise variance sigma^2.
inline double amplitude_for_snr(double snr_db, double noise_variance) {
  return std::sqrt(noise_variance * std::pow(10.0, snr_db / 10.0));
}

inline ComplexMatrix doa_snapshots(const DoaConfig& cfg, Rng& rng, Index& jammed) {
  const Index D = cfg.sensors;
  const double a1 = amplitude_for_snr(cfg.snr1_db, cfg.noise_variance);
  const double a2 = amplitude_for_snr(cfg.snr2_db, cfg.noise_variance);
  const ComplexVector s1 = steering_vector(deg2rad(cfg.theta1_deg), D);
  const ComplexVector s2 = steering_vector(deg2rad(cfg.theta2_deg), D);
  const ComplexVector sj = steering_vector(deg2rad(cfg.jammer_deg), D);
  const double noise_sd = std::sqrt(cfg.noise_variance / 2.0);
  auto phase = [&]() -> Complex {
    switch (cfg.model) {
      case SnapshotModel::RandomSign:
        return rng.below(2) ? 1.0 : -1.0;
      case SnapshotModel::RandomPhase:
        return std::polar(1.0, 2.0 * std::numbers::pi * rng.uniform());
      case SnapshotModel::Constant:
        break;
    }
    return 1.0;
  };
  ComplexMatrix X(D, cfg.snapshots);
  for (Index n = 0; n < cfg.snapshots; ++n) {
    ComplexVector x = a1 * phase() * s1 + a2 * phase() * s2;
    for (Index k = 0; k < D; ++k) x(k) += Complex(noise_sd * rng.normal(), noise_sd * rng.normal());
    X.col(n) = x;
  }
  jammed = static_cast<Index>(rng.below(static_cast<std::uint64_t>(cfg.snapshots)));
  X.col(jammed) += a2 * phase() * sj;
  return X;
}

inline DoaReport run_doa(const DoaConfig& cfg, const SolveOptions& opt = {.workers = 1}) {
  Rng rng(cfg.seed);
  DoaReport r;
  r.snapshots = doa_snapshots(cfg, rng, r.jammed_snapshot);
  const DataMatrix lifted = lift_complex(r.snapshots);
  r.l2 = l2_subspace(lifted, 2, opt.rank_tol);
  r.l1 = solve_multi(lifted, 2, MultiStrategy::Auto, opt);
  const auto grid = angle_grid(cfg.grid_step_deg);
  r.spectrum_l2 = music_spectrum(r.l2, grid);
  r.spectrum_l1 = music_spectrum(r.l1.subspace, grid);
  return r;
}

}  // namespace l1pca::experiments

#endif  // L1PCA_EXPERIMENTS_DOA_HPP
