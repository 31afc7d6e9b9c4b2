#include "phsmg/harness.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>

#include <json.hpp>

namespace phsmg {

int verbosity() {
  static const int level = [] {
    const char* env = std::getenv("PHSMG_VERBOSITY");
    if (!env) return 1;
    const int v = std::atoi(env);
    return v < 0 ? 0 : v;
  }();
  return level;
}

int default_level_size(const Geometry& g, int level_id) {
  static constexpr int square[] = {98, 169, 607, 2535, 10023};
  static constexpr int annulus[] = {90, 188, 650, 2581, 10207};
  static constexpr int square_hole[] = {89, 176, 640, 2532, 10197};
  if (level_id < 1 || level_id > 5)
    throw Error("default_level_size: level_id must be 1..5");
  switch (g.kind) {
    case GeometryKind::Square: return square[level_id - 1];
    case GeometryKind::Annulus: return annulus[level_id - 1];
    case GeometryKind::SquareWithHole: return square_hole[level_id - 1];
  }
  throw Error("default_level_size: unknown geometry");
}

std::string BenchmarkConfig::derived_label() const {
  std::string s = geometry.name();
  s += bc == BcKind::Dirichlet ? "_dirichlet" : "_neumann";
  s += "_k" + std::to_string(wavenumber);
  s += "_deg" + std::to_string(degree);
  s += "_lv" + std::to_string(coarsest_level) + "-" + std::to_string(finest_level);
  s += solver == SolverKind::Multilevel ? "_ml" : "_gmres";
  return s;
}

namespace {

unsigned level_seed(unsigned seed, int level_id) {
  return seed * 1000003u + static_cast<unsigned>(level_id) * 7919u;
}

}  // namespace

Benchmark build_benchmark(const BenchmarkConfig& cfg) {
  if (cfg.coarsest_level > cfg.finest_level)
    throw Error("build_benchmark: coarsest_level exceeds finest_level");
  const int n_levels = cfg.finest_level - cfg.coarsest_level + 1;
  if (!cfg.points_files.empty() &&
      static_cast<int>(cfg.points_files.size()) != n_levels)
    throw Error("build_benchmark: expected " + std::to_string(n_levels) +
                " point files, got " + std::to_string(cfg.points_files.size()));

  Benchmark bench;
  bench.mcase.wavenumber = cfg.wavenumber;
  const ManufacturedCase& mc = bench.mcase;

  const ScalarField source = [mc](const Eigen::Vector2d& x) { return mc.source(x); };
  BoundaryData bc;
  bc.dirichlet = [mc](const Eigen::Vector2d& x) { return mc.value(x); };

  const PointKind btag = cfg.bc == BcKind::Dirichlet ? PointKind::DirichletBoundary
                                                     : PointKind::NeumannBoundary;

  for (int id = cfg.coarsest_level; id <= cfg.finest_level; ++id) {
    const int idx = id - cfg.coarsest_level;
    PointSet ps = cfg.points_files.empty()
                      ? generate_pointset(cfg.geometry, default_level_size(cfg.geometry, id),
                                          level_seed(cfg.seed, id))
                      : load_pointset(cfg.points_files[idx]);
    if (!cfg.points_files.empty() && !(ps.geometry == cfg.geometry))
      throw Error("build_benchmark: point file geometry differs from the configured one");
    ps.level_id = id;
    ps = with_boundary_kind(std::move(ps), btag);

    const int degree = id == cfg.finest_level ? cfg.degree : cfg.coarse_degree;
    LevelData data{std::move(ps), {}};
    data.clouds = build_clouds(data.ps, cloud_size(degree, cfg.cloud_ratio));

    AssemblyOptions aopts;
    aopts.phs_power = cfg.phs_power;
    aopts.degree = degree;

    // All levels need flux data in the all-Neumann mode; harmless otherwise.
    BoundaryData level_bc = bc;
    const PointSet& ps_ref = data.ps;
    if (cfg.bc == BcKind::AllNeumann) {
      // Normals live in the point set; capture by point lookup.
      level_bc.neumann_flux = [mc, &ps_ref](const Eigen::Vector2d& x) -> double {
        for (int i = 0; i < ps_ref.size(); ++i)
          if (ps_ref.points[i] == x) return mc.flux(x, ps_ref.normal[i]);
        throw Error("flux requested at a point not in the set");
      };
    }

    DiscreteProblem prob = assemble_poisson(data.ps, data.clouds, source, level_bc, aopts);
    if (cfg.bc == BcKind::AllNeumann)
      prob = regularize_all_neumann(std::move(prob), data.ps);

    if (verbosity() >= 2)
      std::fprintf(stderr,
                   "[phsmg] level %d: %d points, %d unknowns, bandwidth %d\n", id,
                   data.ps.size(), prob.unknowns(), bandwidth(prob.A));

    bench.data.push_back(std::move(data));
    bench.hierarchy.levels.push_back(std::move(prob));
  }

  TransferOptions topts;
  topts.phs_power = cfg.phs_power;
  topts.degree = cfg.coarse_degree;
  topts.n_cloud = cloud_size(cfg.coarse_degree, cfg.cloud_ratio);
  for (int k = 0; k + 1 < n_levels; ++k) {
    bench.hierarchy.restrictions.push_back(
        build_transfer(bench.data[k + 1].ps, bench.hierarchy.levels[k + 1],
                       bench.data[k].ps, bench.hierarchy.levels[k], topts));
    bench.hierarchy.prolongations.push_back(
        build_transfer(bench.data[k].ps, bench.hierarchy.levels[k],
                       bench.data[k + 1].ps, bench.hierarchy.levels[k + 1], topts));
    if (verbosity() >= 2) {
      const auto& r = bench.hierarchy.restrictions.back();
      const auto& p = bench.hierarchy.prolongations.back();
      std::fprintf(stderr, "[phsmg] transfers %d<->%d: extrapolated %d down, %d up\n",
                   k + cfg.coarsest_level + 1, k + cfg.coarsest_level, r.extrapolated,
                   p.extrapolated);
    }
  }
  bench.hierarchy.validate();
  return bench;
}

double residual_norm(const SparseOperator& A, const Eigen::VectorXd& x,
                     const Eigen::VectorXd& b) {
  return relative_residual(A, x, b);
}

double error_norm(const Eigen::VectorXd& x, const PointSet& ps,
                  const DiscreteProblem& prob, const ManufacturedCase& mcase) {
  if (x.size() != prob.unknowns()) throw Error("error_norm: solution size mismatch");

  Eigen::VectorXd field(ps.size()), exact(ps.size());
  std::vector<const DiscreteProblem::Recovery*> rec_of(ps.size(), nullptr);
  for (const auto& rec : prob.boundary_recovery) rec_of[rec.point] = &rec;

  for (int i = 0; i < ps.size(); ++i) {
    exact[i] = mcase.value(ps.points[i]);
    switch (ps.kind[i]) {
      case PointKind::Interior:
        field[i] = x[prob.row_of[i]];
        break;
      case PointKind::DirichletBoundary:
        field[i] = exact[i];
        break;
      case PointKind::NeumannBoundary:
        if (!rec_of[i]) throw Error("error_norm: Neumann point lacks a recovery row");
        field[i] = rec_of[i]->evaluate(x);
        break;
    }
  }

  if (prob.regularized) {
    field.array() -= field.mean();
    exact.array() -= exact.mean();
  }
  const double den = exact.lpNorm<1>();
  const double num = (field - exact).lpNorm<1>();
  return den > 0.0 ? num / den : num;
}

double fit_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw Error("fit_log_slope: need at least two samples");
  const int n = static_cast<int>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

namespace {

void write_convergence_csv(const std::filesystem::path& path,
                           const std::vector<double>& history) {
  std::ofstream out(path);
  if (!out) throw Error("run_benchmark: cannot open " + path.string());
  out << "cycle,relative_residual\n";
  char line[64];
  for (size_t i = 0; i < history.size(); ++i) {
    std::snprintf(line, sizeof line, "%zu,%.17g\n", i, history[i]);
    out << line;
  }
}

void dump_matrix_market(const std::filesystem::path& dir, const std::string& label,
                        const DiscreteProblem& prob) {
  std::ofstream am(dir / (label + "_A.mtx"));
  prob.A.write_matrix_market(am);
  std::ofstream bm(dir / (label + "_b.mtx"));
  bm << "%%MatrixMarket matrix array real general\n";
  bm << prob.b.size() << " 1\n";
  char line[64];
  for (Eigen::Index i = 0; i < prob.b.size(); ++i) {
    std::snprintf(line, sizeof line, "%.17g\n", prob.b[i]);
    bm << line;
  }
}

const char* bc_name(BcKind bc) { return bc == BcKind::Dirichlet ? "dirichlet" : "neumann"; }
const char* solver_name(SolverKind s) {
  return s == SolverKind::Multilevel ? "ml" : "gmres-ml";
}

}  // namespace

BenchmarkResult run_benchmark(const BenchmarkConfig& cfg,
                              const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  const std::string label = cfg.label.empty() ? cfg.derived_label() : cfg.label;

  Benchmark bench = build_benchmark(cfg);
  const DiscreteProblem& fine = bench.finest();

  BenchmarkResult res;
  res.report = cfg.solver == SolverKind::Multilevel
                   ? solve_multilevel(bench.hierarchy, fine.b, res.solution, cfg.solve)
                   : solve_ml_gmres(bench.hierarchy, fine.b, res.solution, cfg.solve);
  res.error = error_norm(res.solution, bench.finest_data().ps, fine, bench.mcase);
  res.spacing = average_spacing(bench.finest_data().ps);
  res.exit_code = res.report.converged ? 0 : 2;

  res.csv_path = out_dir / (label + "_convergence.csv");
  write_convergence_csv(res.csv_path, res.report.residual_history);

  nlohmann::json j;
  j["config"] = {
      {"geometry", cfg.geometry.name()},
      {"bc", bc_name(cfg.bc)},
      {"wavenumber", cfg.wavenumber},
      {"degree", cfg.degree},
      {"coarse_degree", cfg.coarse_degree},
      {"phs_power", cfg.phs_power},
      {"cloud_ratio", cfg.cloud_ratio},
      {"coarsest_level", cfg.coarsest_level},
      {"finest_level", cfg.finest_level},
      {"solver", solver_name(cfg.solver)},
      {"sweeps", cfg.solve.smoother.sweeps},
      {"omega", cfg.solve.smoother.omega},
      {"tol", cfg.solve.tol},
      {"max_cycles", cfg.solve.max_cycles},
      {"seed", cfg.seed},
  };
  j["converged"] = res.report.converged;
  j["diverged"] = res.report.diverged;
  j["cycles"] = res.report.cycles;
  j["final_residual"] = res.report.residual_history.back();
  j["error_norm"] = res.error;
  j["error_norm_includes_boundary"] = true;
  j["average_spacing"] = res.spacing;
  j["unknowns"] = fine.unknowns();
  j["wall_seconds"] = res.report.wall_seconds;
  if (fine.regularized) {
    j["regularization"] = "zero-mean projection";
    j["sum_constraint_residual"] = res.report.constraint_residual;
  }
  res.json_path = out_dir / (label + "_summary.json");
  std::ofstream js(res.json_path);
  js << j.dump(2) << "\n";

  if (cfg.dump_system) dump_matrix_market(out_dir, label, fine);

  if (verbosity() >= 2)
    for (size_t i = 0; i < res.report.residual_history.size(); ++i)
      std::fprintf(stderr, "[phsmg] %s cycle %zu residual %.3e\n", label.c_str(), i,
                   res.report.residual_history[i]);
  if (verbosity() >= 1)
    std::fprintf(stderr, "[phsmg] %s: %s in %d cycles, residual %.3e, error %.3e, %.2fs\n",
                 label.c_str(), res.report.converged ? "converged" : "NOT converged",
                 res.report.cycles, res.report.residual_history.back(), res.error,
                 res.report.wall_seconds);
  return res;
}

}  // namespace phsmg
