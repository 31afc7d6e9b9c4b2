#pragma once

#include <filesystem>
#include <optional>

#include "phsmg/manufactured.hpp"
#include "phsmg/solver.hpp"

namespace phsmg {

enum class BcKind { Dirichlet, AllNeumann };
enum class SolverKind { Multilevel, GmresMultilevel };

/// Log verbosity from the PHSMG_VERBOSITY environment variable:
/// 0 silent, 1 per-run summaries (default), 2 per-cycle and build detail.
int verbosity();

/// One benchmark instance: geometry, boundary-condition flavour, manufactured
/// wavenumber, discretization degrees, level range, and solver settings.
struct BenchmarkConfig {
  Geometry geometry = Geometry::square();
  BcKind bc = BcKind::Dirichlet;
  int wavenumber = 1;
  int degree = 3;         // finest-level appended polynomial degree
  int coarse_degree = 3;  // coarser levels and the transfer interpolants
  int phs_power = 1;
  double cloud_ratio = 2.0;
  int coarsest_level = 1;
  int finest_level = 5;
  SolverKind solver = SolverKind::Multilevel;
  SolveOptions solve;
  unsigned seed = 0;
  std::vector<std::filesystem::path> points_files;  // coarsest first; else generated
  bool dump_system = false;  // Matrix Market dump of the finest A and b
  std::string label;         // output stem; derived from the config when empty

  std::string derived_label() const;
};

/// Built-in level sizes (ids 1 to 5) for each geometry.
int default_level_size(const Geometry& g, int level_id);

/// Point sets and stencils retained alongside the assembled hierarchy for
/// error evaluation and reporting.
struct LevelData {
  PointSet ps;
  CloudSet clouds;
};

struct Benchmark {
  std::vector<LevelData> data;  // coarsest first, parallel to hierarchy.levels
  LevelHierarchy hierarchy;
  ManufacturedCase mcase;

  const DiscreteProblem& finest() const { return hierarchy.levels.back(); }
  const LevelData& finest_data() const { return data.back(); }
};

/// Generate (or load) every level, assemble, and wire the transfers.
Benchmark build_benchmark(const BenchmarkConfig& cfg);

/// Relative L1 residual of the discrete system (absolute when b = 0).
double residual_norm(const SparseOperator& A, const Eigen::VectorXd& x,
                     const Eigen::VectorXd& b);

/// Relative L1 error of the solved field against the manufactured solution,
/// evaluated over every point: interior from x, Dirichlet from data, Neumann
/// through the stored recovery rows. Regularized problems are compared after
/// shifting both fields to zero mean. Absolute norm when the exact field is
/// identically zero.
double error_norm(const Eigen::VectorXd& x, const PointSet& ps,
                  const DiscreteProblem& prob, const ManufacturedCase& mcase);

/// Least-squares slope of log(y) against log(x); the observed order when x
/// is a spacing and y an error.
double fit_log_slope(const std::vector<double>& x, const std::vector<double>& y);

struct BenchmarkResult {
  SolveReport report;
  Eigen::VectorXd solution;
  double error = 0.0;
  double spacing = 0.0;
  int exit_code = 0;  // 0 converged, 2 not converged or diverged
  std::filesystem::path csv_path;
  std::filesystem::path json_path;
};

/// Solve one configured benchmark and write <label>_convergence.csv plus
/// <label>_summary.json under out_dir.
BenchmarkResult run_benchmark(const BenchmarkConfig& cfg,
                              const std::filesystem::path& out_dir);

}  // namespace phsmg
