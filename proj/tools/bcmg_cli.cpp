// bcmg: experiment front end (solve, rho-sweep, dtau-table, spectrum, cases).

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "bcmg/bcmg.hpp"
#include "bcmg/io.hpp"

namespace fs = std::filesystem;
using namespace bcmg;

namespace {

/// Run options bound to the command line; only options actually given
/// override the config file.
struct RunOptions {
  std::string config_file;
  RunConfig v;
  std::vector<CLI::Option*> opts;
  std::vector<std::function<void(RunConfig&)>> apply;

  template <typename T>
  void add(CLI::App* app, const std::string& flag, T RunConfig::*field, const std::string& help) {
    CLI::Option* o = app->add_option(flag, v.*field, help);
    opts.push_back(o);
    apply.push_back([this, field](RunConfig& c) { c.*field = v.*field; });
  }

  void attach(CLI::App* app) {
    app->add_option("--config", config_file, "key=value config file; explicit flags override it");
    add(app, "--case", &RunConfig::case_name, "test case (see `cases`)");
    add(app, "--N", &RunConfig::n, "cells per axis (power of two)");
    add(app, "--dim", &RunConfig::dim, "dimension of the box case");
    add(app, "--bc", &RunConfig::bc, "dirichlet | neumann");
    add(app, "--pde", &RunConfig::pde, "poisson | reaction");
    add(app, "--theta", &RunConfig::theta, "boundary offset in cells for straight-boundary cases");
    add(app, "--dtau", &RunConfig::dtau, "blfa | blfa-poly | blfa-exp | constant:<v> (Neumann: dtau/h)");
    add(app, "--scheme", &RunConfig::scheme, "tgcs | v | w");
    add(app, "--nu1", &RunConfig::nu1, "pre-smoothing steps");
    add(app, "--nu2", &RunConfig::nu2, "post-smoothing steps");
    add(app, "--seed", &RunConfig::seed, "seed of the random initial guess");
    add(app, "--cycles", &RunConfig::cycles, "cycles to run");
    add(app, "--norm", &RunConfig::norm, "inf | l2");
    add(app, "--coarse", &RunConfig::coarse, "direct | heavy");
    add(app, "--out-dir", &RunConfig::out_dir, "output directory");
  }

  RunConfig resolve() const {
    RunConfig c = config_file.empty() ? RunConfig{} : load_config(config_file);
    for (std::size_t k = 0; k < opts.size(); ++k)
      if (opts[k]->count() > 0) apply[k](c);
    return c;
  }
};

std::string stem_of(const RunConfig& c) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s_%s_N%d", c.case_name.c_str(), c.bc.c_str(), c.n);
  return buf;
}

std::string short_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

fs::path prepare_dir(const RunConfig& c) {
  fs::path dir(c.out_dir);
  fs::create_directories(dir);
  return dir;
}

int cmd_solve(const RunConfig& c) {
  validate(c);
  const RunResult r = run_measurement(c);
  const fs::path dir = prepare_dir(c);
  const std::string stem = stem_of(c);
  {
    std::ofstream f(dir / (stem + "_field.csv"), std::ios::binary);
    write_field(f, r);
  }
  {
    std::ofstream f(dir / (stem + "_history.csv"), std::ios::binary);
    write_residual_history(f, r.report);
  }
  {
    std::ofstream f(dir / (stem + "_report.json"), std::ios::binary);
    f << to_json(c, r).dump(2) << '\n';
  }
  std::printf("case=%s N=%d bc=%s dtau=%s scheme=%s levels=%d ghosts=%zu rho=%s%s (%.2fs)\n", c.case_name.c_str(),
              c.n, c.bc.c_str(), c.dtau.c_str(), c.scheme.c_str(), r.levels, r.ghosts,
              format_double(r.report.rho_asymptotic).c_str(), r.report.diverged ? " DIVERGED" : "", r.seconds);
  if (r.report.diverged) {
    std::fprintf(stderr, "error: iteration diverged (residual grew by more than %g)\n", kDivergenceFactor);
    return 3;
  }
  return 0;
}

struct SweepCell {
  double theta;
  std::string dtau;
  double rho = 0.0;
  bool diverged = false;
  double dtau_value = 0.0;
  std::string error;
};

int cmd_rho_sweep(const RunConfig& base, const std::vector<double>& thetas, const std::vector<double>& dtaus,
                  bool with_blfa, unsigned jobs) {
  validate(base);
  if (!find_case(base.case_name).rectangular)
    throw ConfigError("rho-sweep needs a straight-boundary case (interval, vline, plane3d)");
  std::vector<SweepCell> cells;
  for (double th : thetas) {
    for (double d : dtaus) cells.push_back({th, "constant:" + format_double(d)});
    if (with_blfa) cells.push_back({th, base.dtau.rfind("blfa", 0) == 0 ? base.dtau : "blfa"});
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      RunConfig c = base;
      c.theta = cells[i].theta;
      c.dtau = cells[i].dtau;
      try {
        const RunResult r = run_measurement(c);
        cells[i].rho = r.report.rho_asymptotic;
        cells[i].diverged = r.report.diverged;
        cells[i].dtau_value = r.dtau_max;
      } catch (const std::exception& e) {
        cells[i].error = e.what();
      }
    }
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(cells.size())));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < jobs; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  const fs::path path = prepare_dir(base) / ("rho_sweep_" + stem_of(base) + ".csv");
  std::ofstream f(path, std::ios::binary);
  CsvWriter w(f);
  w.header({"theta", "dtau_mode", "dtau", "rho", "diverged", "error"});
  const double h = 2.0 / base.n;
  for (const auto& cell : cells) {
    const double shown = parse_bc(base.bc) == BcType::Neumann ? cell.dtau_value / h : cell.dtau_value;
    w.cell(cell.theta).cell(cell.dtau).cell(shown).cell(cell.rho).cell(cell.diverged ? 1 : 0).cell(cell.error).end_row();
  }
  std::printf("wrote %s (%zu cells)\n", path.string().c_str(), cells.size());
  return 0;
}

int cmd_dtau_table(const RunConfig& base, int d, const std::vector<double>& thetas) {
  const BcType bc = parse_bc(base.bc);
  const fs::path path = prepare_dir(base) / ("dtau_table_d" + std::to_string(d) + "_" + base.bc + ".csv");
  std::ofstream f(path, std::ios::binary);
  CsvWriter w(f);
  w.header({"theta", "dtau_poly", "dtau_exp", "dtau_continuous"});
  for (double th : thetas) {
    // h = 1: Neumann steps are reported as dtau/h.
    const blfa::Query poly{bc, d, th, 1.0, blfa::Symbol::Polynomial};
    const blfa::Query ex{bc, d, th, 1.0, blfa::Symbol::Exponential};
    w.cell(th).cell(blfa::dtau_opt(poly)).cell(blfa::dtau_opt(ex)).cell(blfa::dtau_opt_continuous(poly)).end_row();
  }
  std::printf("wrote %s\n", path.string().c_str());
  return 0;
}

int cmd_spectrum(const RunConfig& base, const std::vector<double>& thetas, const std::vector<double>& factors,
                 int sweeps) {
  const BcType bc = parse_bc(base.bc);
  const fs::path dir = prepare_dir(base);
  std::ofstream summary(dir / ("spectrum_summary_" + base.bc + "_N" + std::to_string(base.n) + ".csv"),
                        std::ios::binary);
  CsvWriter s(summary);
  s.header({"theta", "factor", "dtau", "high_low_ratio", "high_low_energy_ratio"});
  for (double th : thetas) {
    const double opt = blfa::dtau_opt({bc, 2, th, 1.0, blfa::Symbol::Polynomial});
    for (double fac : factors) {
      const SpectrumReport rep = vline_smoothing_spectrum(base.n, th, bc, fac * opt, sweeps, base.seed);
      const std::string name = "spectrum_" + base.bc + "_N" + std::to_string(base.n) + "_theta" + short_number(th) +
                               "_x" + short_number(fac) + ".csv";
      std::ofstream f(dir / name, std::ios::binary);
      write_spectrum(f, rep);
      s.cell(th).cell(fac).cell(fac * opt).cell(rep.high_low_ratio).cell(rep.high_low_energy_ratio).end_row();
      std::printf("theta=%g dtau=%.6g (x%g): high/low=%.6g\n", th, fac * opt, fac, rep.high_low_ratio);
    }
  }
  return 0;
}

int cmd_cases() {
  for (const auto& c : case_registry())
    std::printf("%-10s %s  %s\n", c.name.c_str(), c.dim == 0 ? "nD" : (std::to_string(c.dim) + "D").c_str(),
                c.description.c_str());
  return 0;
}

std::vector<double> default_theta_grid() {
  std::vector<double> t;
  for (int k = 0; k < 20; ++k) t.push_back(0.05 * k);
  return t;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Boundary-corrected geometric multigrid experiments"};
  app.require_subcommand(1);

  RunOptions solve_opts;
  auto* solve = app.add_subcommand("solve", "measure the asymptotic convergence factor of one configuration");
  solve_opts.attach(solve);

  RunOptions sweep_opts;
  std::vector<double> sweep_thetas{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  std::vector<double> sweep_dtaus{0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0, 2.5, 3.0, 3.5, 4.0};
  bool sweep_blfa = false;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  auto* sweep = app.add_subcommand("rho-sweep", "rho over a (theta, constant dtau) grid on a straight boundary");
  sweep_opts.attach(sweep);
  sweep->add_option("--thetas", sweep_thetas, "theta values")->delimiter(',');
  sweep->add_option("--dtaus", sweep_dtaus, "constant dtau values (Neumann: dtau/h)")->delimiter(',');
  sweep->add_flag("--with-blfa", sweep_blfa, "add one BLFA-optimal row per theta");
  sweep->add_option("--jobs", jobs, "worker threads");

  RunOptions table_opts;
  int table_d = 2;
  std::vector<double> table_thetas = default_theta_grid();
  auto* table = app.add_subcommand("dtau-table", "optimal dtau versus theta");
  table_opts.attach(table);
  table->add_option("--d", table_d, "space dimension")->check(CLI::Range(1, 3));
  table->add_option("--thetas", table_thetas, "theta values")->delimiter(',');

  RunOptions spec_opts;
  std::vector<double> spec_thetas{0.2, 0.5, 0.8};
  std::vector<double> spec_factors{0.5, 1.0, 1.5};
  int spec_sweeps = 10;
  auto* spectrum = app.add_subcommand("spectrum", "ghost residual spectrum after smoothing on the vline case");
  spec_opts.attach(spectrum);
  spectrum->add_option("--thetas", spec_thetas, "theta values")->delimiter(',');
  spectrum->add_option("--factors", spec_factors, "multiples of the optimal dtau")->delimiter(',');
  spectrum->add_option("--sweeps", spec_sweeps, "smoothing steps before the transform");

  app.add_subcommand("cases", "list the test-case registry");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return cmd_solve(solve_opts.resolve());
    if (sweep->parsed()) return cmd_rho_sweep(sweep_opts.resolve(), sweep_thetas, sweep_dtaus, sweep_blfa, jobs);
    if (table->parsed()) return cmd_dtau_table(table_opts.resolve(), table_d, table_thetas);
    if (spectrum->parsed()) return cmd_spectrum(spec_opts.resolve(), spec_thetas, spec_factors, spec_sweeps);
    return cmd_cases();
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const ResolutionError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
