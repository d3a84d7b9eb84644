// l1pca: solve L1 principal components of CSV matrices, run the experiments,
// cross-check the exact solvers and time them.
//
// Exit status: 0 success, 1 usage or input error, 2 numerical contract
// violation, 3 budget refusal, 4 a check reported a mismatch.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <thread>

#include "l1pca/experiments/bench.hpp"
#include "l1pca/experiments/dimred.hpp"
#include "l1pca/experiments/doa.hpp"
#include "l1pca/experiments/image.hpp"
#include "l1pca/experiments/restoration.hpp"
#include "l1pca/l1pca.hpp"

#ifndef L1PCA_DATA_DIR
#define L1PCA_DATA_DIR "data"
#endif

namespace fs = std::filesystem;
using namespace l1pca;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitContract = 2;
constexpr int kExitBudget = 3;
constexpr int kExitMismatch = 4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

fs::path prepare_dir(const std::string& dir) {
  fs::path p(dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw UsageError("cannot create output directory " + dir + ": " + ec.message());
  return p;
}

json matrix_columns(const Matrix& M) {
  json cols = json::array();
  for (Index k = 0; k < M.cols(); ++k) {
    json c = json::array();
    for (Index i = 0; i < M.rows(); ++i) c.push_back(M(i, k));
    cols.push_back(c);
  }
  return cols;
}

json sign_columns(const SignMatrix& B) {
  json cols = json::array();
  for (Index k = 0; k < B.cols(); ++k) {
    json c = json::array();
    for (Index i = 0; i < B.rows(); ++i) c.push_back(static_cast<int>(B(i, k)));
    cols.push_back(c);
  }
  return cols;
}

// ---- solve -----------------------------------------------------------------

struct SolveArgs {
  std::string input;
  Index k = 1;
  std::string method = "auto";
  double rank_tol = kDefaultRankTol;
  std::uint64_t budget = SolveOptions{}.budget;
  std::string output;
  bool json = false;
  unsigned workers = 0;
};

SolveResult dispatch_solve(const DataMatrix& X, const SolveArgs& a, const SolveOptions& opt) {
  const std::string& m = a.method;
  if (m == "fixedpoint")
    return a.k == 1 ? fixed_point_single(X, kDefaultMaxIter, opt.rank_tol).result
                    : fixed_point_multi(X, a.k, kDefaultMaxIter, opt.rank_tol).result;
  if (m == "greedy") return greedy_deflation(X, a.k, kDefaultMaxIter, opt.rank_tol);
  if (a.k == 1) {
    static const std::map<std::string, Strategy> single = {{"auto", Strategy::Auto},   {"exhaustive", Strategy::Exhaustive},
                                                           {"rank1", Strategy::Rank1}, {"rank2", Strategy::Rank2},
                                                           {"poly", Strategy::Poly},   {"approx", Strategy::Approx}};
    return solve(X, single.at(m), opt);
  }
  if (m == "auto") return solve_multi(X, a.k, MultiStrategy::Auto, opt);
  if (m == "exhaustive") return solve_multi(X, a.k, MultiStrategy::Exhaustive, opt);
  if (m == "poly") return solve_multi(X, a.k, MultiStrategy::Poly, opt);
  throw UsageError("method '" + m + "' computes a single component; use --k 1");
}

int run_solve(const SolveArgs& a) {
  const DataMatrix X = io::read_matrix_csv(a.input);
  if (a.k < 1) throw UsageError("--k must be at least 1");
  const SolveOptions opt{.rank_tol = a.rank_tol, .budget = a.budget, .workers = a.workers};
  const SolveResult r = dispatch_solve(X, a, opt);
  if (!a.output.empty()) io::write_matrix_csv(a.output, r.subspace.basis);
  if (a.json) {
    json j;
    j["method"] = std::string(to_string(r.method));
    j["k"] = a.k;
    j["metric"] = r.metric;
    j["signs"] = sign_columns(r.signs);
    j["basis"] = matrix_columns(r.subspace.basis);
    j["candidates_evaluated"] = r.candidates_evaluated;
    j["ties"] = r.ties;
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << "method " << to_string(r.method) << (r.exact ? "" : " (not certified optimal)") << '\n'
              << "metric " << io::format_double(r.metric) << '\n'
              << "candidates_evaluated " << r.candidates_evaluated << '\n'
              << "basis\n";
    io::write_matrix_csv(std::cout, r.subspace.basis);
  }
  return kExitOk;
}

// ---- experiments -------------------------------------------------------------

struct ExperimentArgs {
  std::uint64_t seed = 1;
  std::size_t trials = 0;  // 0: experiment default
  std::string out_dir = "results";
  unsigned workers = 0;
  // dimred
  Index min_outliers = 0, max_outliers = 20, train_size = 20, eval_size = 1000;
  // music
  std::string model = "sign";
  double grid_step = 0.1;
  // image
  std::string image;
  Index tiles = 3;
};

int run_dimred_cmd(const ExperimentArgs& a) {
  using namespace experiments;
  const fs::path dir = prepare_dir(a.out_dir);
  DimredConfig cfg;
  cfg.seed = a.seed;
  cfg.trials = a.trials ? a.trials : 10000;
  cfg.train_size = a.train_size;
  cfg.eval_size = a.eval_size;
  cfg.min_outliers = a.min_outliers;
  cfg.max_outliers = a.max_outliers;
  cfg.workers = a.workers;
  io::CsvTable table({"n_out", "trials", "mse_l2", "mse_l1", "ci95_l2", "ci95_l1", "l1_win_rate"});
  for (const DimredRow& r : run_dimred(cfg)) {
    table.row(std::vector<std::string>{std::to_string(r.n_out), std::to_string(r.trials), io::format_double(r.mse_l2),
                                       io::format_double(r.mse_l1), io::format_double(r.ci95_l2),
                                       io::format_double(r.ci95_l1), io::format_double(r.l1_win_rate)});
    std::printf("n_out %2ld  mse_l2 %8.4f  mse_l1 %8.4f  l1 wins %5.1f%%\n", static_cast<long>(r.n_out), r.mse_l2,
                r.mse_l1, 100.0 * r.l1_win_rate);
  }
  table.write((dir / "dimred_mse.csv").string());

  const DimredIllustration ill = run_dimred_illustration(a.seed);
  io::write_matrix_csv((dir / "dimred_points.csv").string(), ill.corrupted);
  io::CsvTable dirs({"set", "direction", "x", "y", "mse"});
  auto add = [&](const char* set, const char* which, const Vector& r, double mse) {
    dirs.row(std::vector<std::string>{set, which, io::format_double(r(0)), io::format_double(r(1)), io::format_double(mse)});
  };
  add("clean", "l2", ill.r_l2_clean, ill.mse_l2_clean);
  add("clean", "l1", ill.r_l1_clean, ill.mse_l1_clean);
  add("corrupted", "l2", ill.r_l2_corrupted, ill.mse_l2_corrupted);
  add("corrupted", "l1", ill.r_l1_corrupted, ill.mse_l1_corrupted);
  dirs.write((dir / "dimred_directions.csv").string());
  std::printf("illustration: clean mse l2 %.3f l1 %.3f; corrupted mse l2 %.3f l1 %.3f\n", ill.mse_l2_clean,
              ill.mse_l1_clean, ill.mse_l2_corrupted, ill.mse_l1_corrupted);
  return kExitOk;
}

int run_restore_cmd(const ExperimentArgs& a) {
  using namespace experiments;
  const fs::path dir = prepare_dir(a.out_dir);
  const RestorationReport r = run_restoration({.workers = a.workers});
  io::write_matrix_csv((dir / "restored_l2.csv").string(), r.restored_l2);
  io::write_matrix_csv((dir / "restored_l1.csv").string(), r.restored_l1);
  io::write_matrix_csv((dir / "sq_error_l2.csv").string(), r.sq_error_l2);
  io::write_matrix_csv((dir / "sq_error_l1.csv").string(), r.sq_error_l1);
  io::CsvTable per({"sample", "sq_error_l2", "sq_error_l1"});
  for (Index n = 0; n < r.per_sample_l2.size(); ++n)
    per.row(std::vector<std::string>{std::to_string(n + 1), io::format_double(r.per_sample_l2(n)),
                                     io::format_double(r.per_sample_l1(n))});
  per.write((dir / "per_sample_error.csv").string());
  std::printf("L2 projection: max deviation from reference %.3g\n", r.max_dev_l2);
  std::printf("L1 projection: max deviation from reference %.3g (metric %.6f, %s)\n", r.max_dev_l1, r.l1.metric,
              std::string(to_string(r.l1.method)).c_str());
  std::printf("total squared error vs clean: L2 %.4f, L1 %.4f\n", r.per_sample_l2.sum(), r.per_sample_l1.sum());
  if (r.matches_reference()) return kExitOk;
  std::fprintf(stderr, "restore: result differs from the reference matrices by more than %g\n", kRestorationTolerance);
  return kExitMismatch;
}

experiments::SnapshotModel parse_model(const std::string& s) {
  if (s == "sign") return experiments::SnapshotModel::RandomSign;
  if (s == "phase") return experiments::SnapshotModel::RandomPhase;
  if (s == "constant") return experiments::SnapshotModel::Constant;
  throw UsageError("unknown snapshot model '" + s + "'");
}

int run_music_cmd(const ExperimentArgs& a) {
  using namespace experiments;
  const fs::path dir = prepare_dir(a.out_dir);
  const std::size_t runs = a.trials ? a.trials : 1;
  io::CsvTable summary({"seed", "jammed_snapshot", "l1_peak1_deg", "l1_peak2_deg", "l2_peak1_deg", "l2_peak2_deg",
                        "l1_at_jammer", "l2_at_jammer"});
  for (std::size_t t = 0; t < runs; ++t) {
    DoaConfig cfg;
    cfg.seed = a.seed + t;
    cfg.model = parse_model(a.model);
    cfg.grid_step_deg = a.grid_step;
    const DoaReport r = run_doa(cfg, {.workers = a.workers});
    if (t == 0) {
      io::CsvTable spec({"theta_deg", "p_l2", "p_l1"});
      for (std::size_t i = 0; i < r.spectrum_l1.angles.size(); ++i)
        spec.row(std::vector<double>{rad2deg(r.spectrum_l1.angles[i]), r.spectrum_l2.values[i], r.spectrum_l1.values[i]});
      spec.write((dir / "music_spectrum.csv").string());
    }
    auto peaks = [](const SpectrumTable& s) {
      auto p = spectrum_peaks(s, 2);
      p.resize(2, std::numeric_limits<double>::quiet_NaN());
      return p;
    };
    const auto p1 = peaks(r.spectrum_l1), p2 = peaks(r.spectrum_l2);
    const double jam = deg2rad(cfg.jammer_deg);
    summary.row(std::vector<std::string>{
        std::to_string(cfg.seed), std::to_string(r.jammed_snapshot + 1), io::format_double(rad2deg(p1[0])),
        io::format_double(rad2deg(p1[1])), io::format_double(rad2deg(p2[0])), io::format_double(rad2deg(p2[1])),
        io::format_double(spectrum_at(r.spectrum_l1, jam)), io::format_double(spectrum_at(r.spectrum_l2, jam))});
    std::printf("seed %llu: L1 peaks %.1f %.1f, L2 peaks %.1f %.1f, at jammer L1 %.3f L2 %.3f\n",
                static_cast<unsigned long long>(cfg.seed), rad2deg(p1[0]), rad2deg(p1[1]), rad2deg(p2[0]),
                rad2deg(p2[1]), spectrum_at(r.spectrum_l1, jam), spectrum_at(r.spectrum_l2, jam));
  }
  summary.write((dir / "music_summary.csv").string());
  return kExitOk;
}

io::GrayImage load_image(const std::string& path) {
  if (!path.empty()) return io::read_pgm(path);
  const fs::path bundled = fs::path(L1PCA_DATA_DIR) / "test_image.pgm";
  if (fs::exists(bundled)) return io::read_pgm(bundled.string());
  return experiments::synthetic_test_image();
}

int run_image_cmd(const ExperimentArgs& a) {
  using namespace experiments;
  const fs::path dir = prepare_dir(a.out_dir);
  const io::GrayImage img = load_image(a.image);
  const std::size_t runs = a.trials ? a.trials : 1;
  io::CsvTable table({"seed", "mae_l2", "mae_l1", "mse_l2", "mse_l1", "mae_occluded_l2", "mae_occluded_l1"});
  for (std::size_t t = 0; t < runs; ++t) {
    ImageConfig cfg;
    cfg.seed = a.seed + t;
    cfg.tiles = a.tiles;
    const ImageReport r = run_image(cfg, img, {.workers = a.workers});
    if (t == 0) {
      io::write_pgm((dir / "clean.pgm").string(), img);
      io::write_pgm((dir / "occluded_1.pgm").string(), r.occluded.front());
      io::write_pgm((dir / "recon_l2_1.pgm").string(), devectorize(r.recon_l2.col(0), img.rows, img.cols));
      io::write_pgm((dir / "recon_l1_1.pgm").string(), devectorize(r.recon_l1.col(0), img.rows, img.cols));
    }
    table.row(std::vector<std::string>{std::to_string(cfg.seed), io::format_double(r.mae_l2), io::format_double(r.mae_l1),
                                       io::format_double(r.mse_l2), io::format_double(r.mse_l1),
                                       io::format_double(r.mae_occluded_l2), io::format_double(r.mae_occluded_l1)});
    std::printf("seed %llu: mean abs error L2 %.3f L1 %.3f (occluded pixels L2 %.3f L1 %.3f)\n",
                static_cast<unsigned long long>(cfg.seed), r.mae_l2, r.mae_l1, r.mae_occluded_l2, r.mae_occluded_l1);
  }
  table.write((dir / "image_errors.csv").string());
  return kExitOk;
}

// ---- verify ------------------------------------------------------------------

int run_verify(std::size_t trials, std::uint64_t seed, unsigned workers) {
  using experiments::Rng;
  const SolveOptions opt{.workers = workers};
  std::size_t failures = 0, checks = 0;
  auto check = [&](bool ok, const std::string& what) {
    ++checks;
    if (!ok) {
      ++failures;
      std::fprintf(stderr, "verify: mismatch in %s\n", what.c_str());
    }
  };
  auto close = [](double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(std::abs(a), std::abs(b)); };
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng(Rng::derive(seed, t));
    const Index D = 2 + static_cast<Index>(rng.below(4));
    const Index N = 4 + static_cast<Index>(rng.below(9));
    const Index d = 1 + static_cast<Index>(rng.below(static_cast<std::uint64_t>(std::min(D, N))));
    DataMatrix X = experiments::bench_matrix(D, d, rng.next()) * experiments::bench_matrix(d, N, rng.next());
    const std::string tag = "trial " + std::to_string(t) + " (D=" + std::to_string(D) + ", N=" + std::to_string(N) +
                            ", rank " + std::to_string(d) + ")";
    const SolveResult ex = solve_exhaustive(X, opt);
    const SolveResult po = solve_poly(X, opt);
    check(close(po.metric, ex.metric), tag + ": poly vs exhaustive");
    check(close(ex.metric, (X * as_real(ex.sign_vector())).norm()), tag + ": single-component identity");
    if (d == 1) check(close(solve_rank1(X, opt).metric, ex.metric), tag + ": rank1 vs exhaustive");
    if (d == 2) check(close(solve_rank2(X, opt).metric, ex.metric), tag + ": rank2 vs exhaustive");
    if (N <= 8 && d >= 2) {
      const SolveResult mex = solve_multi_exhaustive(X, 2, opt);
      const SolveResult mpo = solve_multi_poly(X, 2, opt);
      check(close(mpo.metric, mex.metric), tag + ": multi poly vs exhaustive");
      check(close(mex.metric, nuclear_norm(X * as_real(mex.signs))), tag + ": nuclear-norm identity");
    }
  }
  std::printf("verify: %zu trials, %zu checks, %zu failures\n", trials, checks, failures);
  return failures == 0 ? kExitOk : kExitMismatch;
}

// ---- bench -------------------------------------------------------------------

int run_bench(std::size_t repeats, std::uint64_t seed, unsigned workers, unsigned speedup_workers) {
  using namespace experiments;
  const unsigned w = resolve_workers(workers);
  std::printf("d,N,K,workers,candidates,seconds,reference_seconds,ratio\n");
  for (const BenchCell& c : reference_grid()) {
    const BenchTiming t = time_cell(c.d, c.N, 2, w, repeats, seed);
    std::printf("%ld,%ld,2,%u,%llu,%.6f,%.4f,%.4f\n", static_cast<long>(c.d), static_cast<long>(c.N), w,
                static_cast<unsigned long long>(t.candidates), t.seconds, c.reference_seconds, t.seconds / c.reference_seconds);
  }
  const BenchTiming one = time_cell(5, 12, 2, 1, repeats, seed);
  const BenchTiming many = time_cell(5, 12, 2, speedup_workers, repeats, seed);
  std::printf("speedup d=5 N=12: 1 worker %.6f s, %u workers %.6f s, ratio %.2f (hardware threads: %u)\n", one.seconds,
              speedup_workers, many.seconds, one.seconds / many.seconds, std::thread::hardware_concurrency());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact L1-norm principal component analysis"};
  app.require_subcommand(1);

  SolveArgs sa;
  auto* solve_cmd = app.add_subcommand("solve", "L1 principal components of a CSV matrix (D rows x N samples)");
  solve_cmd->add_option("--input", sa.input, "CSV matrix file")->required();
  solve_cmd->add_option("--k", sa.k, "number of components")->capture_default_str();
  solve_cmd->add_option("--method", sa.method, "solver")
      ->check(CLI::IsMember({"auto", "exhaustive", "rank1", "rank2", "poly", "approx", "fixedpoint", "greedy"}))
      ->capture_default_str();
  solve_cmd->add_option("--rank-tol", sa.rank_tol, "relative singular-value cutoff")->capture_default_str();
  solve_cmd->add_option("--budget", sa.budget, "max metric evaluations for exhaustive search")->capture_default_str();
  solve_cmd->add_option("--output", sa.output, "write the D x K basis as CSV");
  solve_cmd->add_flag("--json", sa.json, "print the result as JSON");
  solve_cmd->add_option("--workers", sa.workers, "worker threads (0: all)")->capture_default_str();

  ExperimentArgs ea;
  auto* exp_cmd = app.add_subcommand("experiment", "run one of the experiments");
  exp_cmd->require_subcommand(1);
  auto common = [&](CLI::App* c) {
    c->add_option("--seed", ea.seed, "RNG seed")->capture_default_str();
    c->add_option("--trials", ea.trials, "number of trials or seeds");
    c->add_option("--out-dir", ea.out_dir, "output directory")->capture_default_str();
    c->add_option("--workers", ea.workers, "worker threads (0: all)")->capture_default_str();
  };
  auto* dimred_cmd = exp_cmd->add_subcommand("dimred", "line fitting under outliers");
  common(dimred_cmd);
  dimred_cmd->add_option("--min-outliers", ea.min_outliers)->capture_default_str();
  dimred_cmd->add_option("--max-outliers", ea.max_outliers)->capture_default_str();
  dimred_cmd->add_option("--train-size", ea.train_size)->capture_default_str();
  dimred_cmd->add_option("--eval-size", ea.eval_size)->capture_default_str();
  auto* restore_cmd = exp_cmd->add_subcommand("restore", "rank-2 restoration of the 5x8 fixture");
  common(restore_cmd);
  auto* music_cmd = exp_cmd->add_subcommand("music", "MUSIC direction finding with a jammed snapshot");
  common(music_cmd);
  music_cmd->add_option("--model", ea.model, "snapshot model")
      ->check(CLI::IsMember({"sign", "phase", "constant"}))
      ->capture_default_str();
  music_cmd->add_option("--grid-step", ea.grid_step, "grid step in degrees")->capture_default_str();
  auto* image_cmd = exp_cmd->add_subcommand("image", "rank-2 reconstruction of occluded images");
  common(image_cmd);
  image_cmd->add_option("--image", ea.image, "8-bit PGM (default: bundled test image)");
  image_cmd->add_option("--tiles", ea.tiles, "tiles occluded per instance")->capture_default_str();

  std::size_t verify_trials = 200;
  std::uint64_t verify_seed = 1;
  unsigned verify_workers = 0;
  auto* verify_cmd = app.add_subcommand("verify", "randomized cross-check of the exact solvers");
  verify_cmd->add_option("--trials", verify_trials)->capture_default_str();
  verify_cmd->add_option("--seed", verify_seed)->capture_default_str();
  verify_cmd->add_option("--workers", verify_workers)->capture_default_str();

  std::size_t bench_repeats = 3;
  std::uint64_t bench_seed = 1;
  unsigned bench_workers = 0, bench_speedup = 4;
  auto* bench_cmd = app.add_subcommand("bench", "time the K=2 solver on the reference grid");
  bench_cmd->add_option("--repeats", bench_repeats)->capture_default_str();
  bench_cmd->add_option("--seed", bench_seed)->capture_default_str();
  bench_cmd->add_option("--workers", bench_workers)->capture_default_str();
  bench_cmd->add_option("--speedup-workers", bench_speedup)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*solve_cmd) return run_solve(sa);
    if (*dimred_cmd) return run_dimred_cmd(ea);
    if (*restore_cmd) return run_restore_cmd(ea);
    if (*music_cmd) return run_music_cmd(ea);
    if (*image_cmd) return run_image_cmd(ea);
    if (*verify_cmd) return run_verify(verify_trials, verify_seed, verify_workers);
    if (*bench_cmd) return run_bench(bench_repeats, bench_seed, bench_workers, bench_speedup);
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget refusal: " << e.what() << '\n';
    return kExitBudget;
  } catch (const ContractViolation& e) {
    std::cerr << "contract violation: " << e.what() << '\n';
    return kExitContract;
  } catch (const ZeroRankError& e) {
    std::cerr << "contract violation: " << e.what() << '\n';
    return kExitContract;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
