// Command-line front end: `phsmg solve` runs one benchmark case, `phsmg
// sweep` runs a parameter matrix and tabulates errors against spacing.
// Exit codes: 0 converged, 2 diverged or out of cycles, 1 usage error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>
#include <json.hpp>

#include "phsmg/harness.hpp"

namespace {

using phsmg::BenchmarkConfig;

struct CommonArgs {
  std::string geometry = "square";
  std::string bc = "dirichlet";
  std::vector<int> wavenumbers{1};
  std::vector<int> degrees{3};
  int phs_power = 1;
  std::string levels = "5";
  int coarsest_level = 1;
  std::string solver = "ml";
  int sweeps = 5;
  double omega = 1.4;
  double tol = 1e-10;
  int max_cycles = 100;
  unsigned seed = 0;
  int coarse_degree = 3;
  double cloud_ratio = 2.0;
  bool coarse_direct = false;
  bool gmres_verbatim = false;
  bool dump_system = false;
  std::vector<std::string> points_files;
  std::string out_dir = "out";
};

void add_common(CLI::App* cmd, CommonArgs& a, bool sweep) {
  cmd->add_option("--geometry", a.geometry, "square | annulus | square-hole")
      ->check(CLI::IsMember({"square", "annulus", "square-hole"}));
  cmd->add_option("--bc", a.bc, "dirichlet | neumann (all boundaries)")
      ->check(CLI::IsMember({"dirichlet", "neumann"}));
  auto* k = cmd->add_option("--k", a.wavenumbers, "manufactured-solution wavenumber");
  auto* deg = cmd->add_option("--degree", a.degrees, "appended polynomial degree");
  if (!sweep) {
    k->expected(1);
    deg->expected(1);
  }
  cmd->add_option("--p", a.phs_power, "polyharmonic exponent parameter (kernel r^(2p+1))")
      ->check(CLI::Range(1, 3));
  cmd->add_option("--levels", a.levels,
                  sweep ? "finest level or range, e.g. 5 or 3..5" : "finest level (1..5)");
  cmd->add_option("--coarsest-level", a.coarsest_level, "coarsest level id (1..5)");
  cmd->add_option("--solver", a.solver, "ml | gmres-ml")
      ->check(CLI::IsMember({"ml", "gmres-ml"}));
  cmd->add_option("--sweeps", a.sweeps, "smoothing sweeps per level");
  cmd->add_option("--omega", a.omega, "SOR relaxation factor");
  cmd->add_option("--tol", a.tol, "relative residual tolerance");
  cmd->add_option("--max-cycles", a.max_cycles, "cycle / iteration cap");
  cmd->add_option("--seed", a.seed, "point-generation seed");
  cmd->add_option("--coarse-degree", a.coarse_degree,
                  "degree on coarse levels and transfers");
  cmd->add_option("--cloud-ratio", a.cloud_ratio, "stencil size over monomial count");
  cmd->add_flag("--coarse-direct", a.coarse_direct, "direct solve on the coarsest level");
  cmd->add_flag("--gmres-verbatim", a.gmres_verbatim,
                "uncorrected GMRES update variant (comparison only)");
  cmd->add_flag("--dump-system", a.dump_system, "write finest A and b in Matrix Market");
  cmd->add_option("--points-file", a.points_files,
                  "point-set file per level, coarsest first (repeatable)");
  cmd->add_option("--out", a.out_dir, "output directory");
}

std::pair<int, int> parse_levels(const std::string& s, bool allow_range) {
  const auto dots = s.find("..");
  try {
    if (dots == std::string::npos) {
      const int v = std::stoi(s);
      return {v, v};
    }
    if (!allow_range)
      throw phsmg::Error("--levels: a range is only valid for sweep");
    const int lo = std::stoi(s.substr(0, dots));
    const int hi = std::stoi(s.substr(dots + 2));
    if (lo > hi) throw phsmg::Error("--levels: empty range " + s);
    return {lo, hi};
  } catch (const std::invalid_argument&) {
    throw phsmg::Error("--levels: cannot parse '" + s + "'");
  } catch (const std::out_of_range&) {
    throw phsmg::Error("--levels: cannot parse '" + s + "'");
  }
}

BenchmarkConfig to_config(const CommonArgs& a, int k, int degree, int finest) {
  BenchmarkConfig cfg;
  if (a.geometry == "square") cfg.geometry = phsmg::Geometry::square();
  else if (a.geometry == "annulus") cfg.geometry = phsmg::Geometry::annulus();
  else cfg.geometry = phsmg::Geometry::square_with_hole();
  cfg.bc = a.bc == "dirichlet" ? phsmg::BcKind::Dirichlet : phsmg::BcKind::AllNeumann;
  cfg.wavenumber = k;
  cfg.degree = degree;
  cfg.coarse_degree = a.coarse_degree;
  cfg.phs_power = a.phs_power;
  cfg.cloud_ratio = a.cloud_ratio;
  cfg.coarsest_level = a.coarsest_level;
  cfg.finest_level = finest;
  cfg.solver = a.solver == "ml" ? phsmg::SolverKind::Multilevel
                                : phsmg::SolverKind::GmresMultilevel;
  cfg.solve.smoother.sweeps = a.sweeps;
  cfg.solve.smoother.omega = a.omega;
  cfg.solve.smoother.coarse_direct = a.coarse_direct;
  cfg.solve.tol = a.tol;
  cfg.solve.max_cycles = a.max_cycles;
  cfg.solve.gmres_verbatim = a.gmres_verbatim;
  cfg.seed = a.seed;
  cfg.dump_system = a.dump_system;
  for (const auto& f : a.points_files) cfg.points_files.emplace_back(f);
  return cfg;
}

int run_solve(const CommonArgs& a) {
  const auto [lo, hi] = parse_levels(a.levels, false);
  const BenchmarkConfig cfg = to_config(a, a.wavenumbers.at(0), a.degrees.at(0), hi);
  (void)lo;
  const auto res = phsmg::run_benchmark(cfg, a.out_dir);
  std::printf("%s: %s, cycles %d, residual %.3e, error %.3e\n",
              cfg.derived_label().c_str(),
              res.report.converged ? "converged" : "not converged", res.report.cycles,
              res.report.residual_history.back(), res.error);
  return res.exit_code;
}

int run_sweep(const CommonArgs& a) {
  const auto [lo, hi] = parse_levels(a.levels, true);
  if (!a.points_files.empty())
    throw phsmg::Error("sweep: --points-file is only supported by solve");

  std::filesystem::create_directories(a.out_dir);
  std::ofstream csv(std::filesystem::path(a.out_dir) / "sweep.csv");
  csv << "geometry,bc,k,degree,finest_level,unknowns,spacing,cycles,converged,"
         "final_residual,error_norm\n";

  nlohmann::json cases = nlohmann::json::array();
  std::map<std::pair<int, int>, std::pair<std::vector<double>, std::vector<double>>> groups;
  int worst = 0;
  for (int k : a.wavenumbers)
    for (int degree : a.degrees)
      for (int finest = lo; finest <= hi; ++finest) {
        const BenchmarkConfig cfg = to_config(a, k, degree, finest);
        const auto res = phsmg::run_benchmark(cfg, a.out_dir);
        worst = std::max(worst, res.exit_code);

        char row[256];
        std::snprintf(row, sizeof row, "%s,%s,%d,%d,%d,%d,%.17g,%d,%d,%.17g,%.17g\n",
                      cfg.geometry.name().c_str(), a.bc.c_str(), k, degree, finest,
                      res.solution.size() > 0 ? static_cast<int>(res.solution.size()) : 0,
                      res.spacing, res.report.cycles, res.report.converged ? 1 : 0,
                      res.report.residual_history.back(), res.error);
        csv << row;
        cases.push_back({{"label", cfg.derived_label()},
                         {"k", k},
                         {"degree", degree},
                         {"finest_level", finest},
                         {"spacing", res.spacing},
                         {"cycles", res.report.cycles},
                         {"converged", res.report.converged},
                         {"error_norm", res.error}});
        if (res.report.converged) {
          groups[{k, degree}].first.push_back(res.spacing);
          groups[{k, degree}].second.push_back(res.error);
        }
      }

  nlohmann::json slopes = nlohmann::json::array();
  for (const auto& [key, xy] : groups)
    if (xy.first.size() >= 2) {
      const double slope = phsmg::fit_log_slope(xy.first, xy.second);
      slopes.push_back({{"k", key.first}, {"degree", key.second}, {"slope", slope}});
      std::printf("k=%d degree=%d: observed order %.2f over %zu levels\n", key.first,
                  key.second, slope, xy.first.size());
    }

  nlohmann::json j{{"cases", cases}, {"slopes", slopes}};
  std::ofstream js(std::filesystem::path(a.out_dir) / "sweep_summary.json");
  js << j.dump(2) << "\n";
  return worst;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Meshless multilevel Poisson benchmark"};
  app.require_subcommand(1);

  CommonArgs solve_args, sweep_args;
  CLI::App* solve = app.add_subcommand("solve", "run one configuration");
  add_common(solve, solve_args, false);
  CLI::App* sweep = app.add_subcommand("sweep", "run a parameter matrix");
  add_common(sweep, sweep_args, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }

  try {
    return solve->parsed() ? run_solve(solve_args) : run_sweep(sweep_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
