#include <CLI11.hpp>

#include "cli.hpp"
#include "qcrit/version.hpp"

int main(int argc, char** argv) {
  using qcrit::cli::RunConfig;

  CLI::App app{
      "qcrit: quantum Fisher information for critical probe models "
      "(Landau-Zener, transverse-field Ising, Lipkin-Meshkov-Glick) with "
      "Gaussian uncertainty in the coupling"};
  app.set_version_flag("--version", qcrit::kVersion);
  app.set_config("--config", "",
                 "read options from a key = value file (flags take "
                 "precedence, subcommand options go in [command] sections)");
  app.require_subcommand(1);

  RunConfig cfg;

  auto add_model = [&](CLI::App* sub, bool thermo_ok) {
    std::string desc = thermo_ok ? "probe model: lz, tfim, lmg, lmg-thermo"
                                 : "probe model: lz, tfim, lmg";
    sub->add_option("--model", cfg.model, desc)->capture_default_str();
    sub->add_option("--omega", cfg.omega, "transverse field (energy units)")
        ->capture_default_str();
  };
  auto add_out = [&](CLI::App* sub) {
    sub->add_option("--out", cfg.out_dir, "output directory")
        ->envname("QCRIT_OUTPUT_DIR")
        ->capture_default_str();
    sub->add_option("--prefix", cfg.prefix,
                    "base name for output files (default: command name)");
  };
  auto add_quad = [&](CLI::App* sub) {
    sub->add_option("--m", cfg.quad_nodes, "Gauss-Hermite quadrature order")
        ->capture_default_str();
    sub->add_option("--workers", cfg.workers,
                    "worker threads (0 = available parallelism)")
        ->capture_default_str();
  };

  CLI::App* qfim = app.add_subcommand(
      "qfim", "print the 2x2 QFIM, determinant, singularity flag and "
              "variance bounds at one parameter point");
  add_model(qfim, true);
  qfim->add_option("--g", cfg.g, "coupling")->capture_default_str();
  qfim->add_option("--n", cfg.n_spec, "system size")->capture_default_str();

  CLI::App* sweep = app.add_subcommand(
      "sweep", "QFI over a coupling grid for a list of uncertainties");
  CLI::App* phase = app.add_subcommand(
      "phase-diagram", "QFI over a (coupling, uncertainty) grid");
  for (CLI::App* sub : {sweep, phase}) {
    add_model(sub, false);
    sub->add_option("--n", cfg.n_spec, "system size")->capture_default_str();
    sub->add_option("--g", cfg.g_spec,
                    "coupling grid start:stop[:count] or comma list")
        ->capture_default_str();
    sub->add_option(sub == sweep ? "--sigma-list" : "--sigma", cfg.sigma_spec,
                    "uncertainty values (grid or comma list)");
    sub->add_flag("!--no-convergence-check", cfg.check_convergence,
                  "skip the per-cell quadrature doubling check");
    sub->add_option("--rank-tol", cfg.rank_cutoff,
                    "eigenvalue-pair cutoff in the mixed-state QFI")
        ->capture_default_str();
    add_quad(sub);
    add_out(sub);
  }

  CLI::App* peak = app.add_subcommand(
      "peak-scaling",
      "peak QFI over the coupling for each (system size, uncertainty)");
  add_model(peak, false);
  peak->add_option("--n", cfg.n_spec,
                   "system sizes: comma list or lo:hi[:count] (log-spaced)")
      ->capture_default_str();
  peak->add_option("--sigma-list", cfg.sigma_spec, "uncertainty values");
  peak->add_option("--search", cfg.search_spec,
                   "peak search range lo:hi[:count] (default 0:2*omega:201)");
  add_quad(peak);
  add_out(peak);

  CLI::App* sigf = app.add_subcommand(
      "sigma-f",
      "largest uncertainty at which the peak QFI still tracks the ideal one");
  add_model(sigf, false);
  sigf->add_option("--n", cfg.n_spec, "system sizes")->capture_default_str();
  sigf->add_option("--epsilon", cfg.epsilon_rel,
                   "relative departure criterion on the peak QFI")
      ->capture_default_str();
  sigf->add_option("--sigma-grid", cfg.sigma_grid_spec,
                   "log grid lo:hi:per_decade (default 1e-4:1:48, times omega)");
  sigf->add_option("--search", cfg.search_spec, "peak search range");
  add_quad(sigf);
  add_out(sigf);

  CLI::App* fit = app.add_subcommand(
      "fit", "least-squares power law a*x^b through a CSV produced by "
             "peak-scaling or sigma-f");
  fit->add_option("--input", cfg.fit_input, "input CSV")->required();
  fit->add_option("--x", cfg.fit_x, "x column name (default: n)");
  fit->add_option("--y", cfg.fit_y,
                  "y column name (default: first known value column)");
  fit->add_option("--where", cfg.fit_where,
                  "row filter column=value (e.g. sigma_over_omega=0)");
  add_out(fit);

  CLI::App* rerun = app.add_subcommand(
      "rerun", "reproduce a run from its JSON sidecar");
  rerun->add_option("sidecar", cfg.rerun_path, "sidecar JSON path")
      ->required();
  rerun->add_option("--out", cfg.out_dir, "output directory override");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : qcrit::cli::kExitUsage;
  }

  for (CLI::App* sub : {qfim, sweep, phase, peak, sigf, fit, rerun})
    if (sub->parsed()) cfg.command = sub->get_name();
  return qcrit::cli::run_command(cfg);
}
