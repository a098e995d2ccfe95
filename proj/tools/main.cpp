// hierpareto: command-line front end.
//
//   hierpareto [common flags] exponents
//   hierpareto [common flags] solve [--restrict Y]
//   hierpareto [common flags] spectrum [--n N] [--basis collocation|fourier]
//   hierpareto [common flags] simulate --mode rho_mc|exit_times|geom_moments|lemma_checks
//   hierpareto [common flags] mixture [--a1 A] [--a2 A] [--n N]
//
// Settings are read from --config, then HIERPARETO_* environment variables,
// then the explicit flags. Exit status: 0 ok, 2 config error, 3 no
// convergence, 4 failed lemma check, 1 anything else.

#include "commands.hpp"

#include "hierpareto/errors.hpp"
#include "hierpareto/table_io.hpp"

#include "CLI11.hpp"

#include <omp.h>

#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>

using namespace hierpareto;
using namespace hierpareto::cli;

int main(int argc, char** argv) {
  CLI::App app{"Stationary income densities of a hierarchical economy: exponents, solver, spectrum, simulations."};
  app.set_version_flag("--version", std::string("hierpareto ") + HIERPARETO_VERSION);
  app.require_subcommand(1);
  app.fallthrough();

  RunContext ctx;
  std::string out_dir = ".";
  std::optional<long> grid_nodes;
  std::optional<double> x_min, tol;
  app.add_option("--config", ctx.config_path, "key = value model file")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory (created if missing)");
  app.add_option("--seed", ctx.seed, "master seed for every random stream");
  app.add_option("--threads", ctx.threads, "OpenMP threads; 1 runs sequentially")->check(CLI::NonNegativeNumber);
  app.add_option("--grid-nodes", grid_nodes, "solver.n_nodes override");
  app.add_option("--x-min", x_min, "solver.x_min override");
  app.add_option("--tol", tol, "solver.tol override");
  app.add_option("--paths", ctx.paths, "Monte Carlo paths (or trials) per estimate")->check(CLI::PositiveNumber);

  auto* exp_cmd = app.add_subcommand("exponents", "predicted exponents b, d, alpha and the Pareto indices");

  SolveFlags solve_flags;
  auto* solve_cmd = app.add_subcommand("solve", "fixed-point solve for rho and the income densities");
  solve_cmd->add_option("--restrict", solve_flags.restrict_to, "solve on [Y, 1] only");
  solve_cmd->add_option("--table-points", solve_flags.table_points, "rows in the density tables");

  SpectrumFlags spec_flags;
  auto* spec_cmd = app.add_subcommand("spectrum", "eigenvalues of I - A_n");
  spec_cmd->add_option("--n", spec_flags.n, "discretisation size");
  spec_cmd->add_option("--basis", spec_flags.basis, "collocation or fourier")
      ->check(CLI::IsMember({"collocation", "fourier"}));

  SimulateFlags sim_flags;
  auto* sim_cmd = app.add_subcommand("simulate", "Markov-chain and random-progression experiments");
  sim_cmd->add_option("--mode", sim_flags.mode, "experiment")
      ->required()
      ->check(CLI::IsMember({"rho_mc", "exit_times", "geom_moments", "lemma_checks"}));
  sim_cmd->add_option("--x", sim_flags.xs, "starting points (mode default when omitted)");
  sim_cmd->add_option("--gamma", sim_flags.gammas, "Beta-factor exponents for the progressions");
  sim_cmd->add_option("--moments", sim_flags.moments, "highest moment order")->check(CLI::PositiveNumber);

  MixtureFlags mix_flags;
  auto* mix_cmd = app.add_subcommand("mixture", "tail exponent of a two-component Pareto mixture");
  mix_cmd->add_option("--a1", mix_flags.a1, "heavier component exponent");
  mix_cmd->add_option("--a2", mix_flags.a2, "lighter component exponent");
  mix_cmd->add_option("--n", mix_flags.n, "sample size per share");
  mix_cmd->add_option("--window-lo", mix_flags.window_lo, "lowest CCDF level in the fit");
  mix_cmd->add_option("--window-hi", mix_flags.window_hi, "highest CCDF level in the fit");
  mix_cmd->add_option("--steps", mix_flags.steps, "number of shares in [0.05, 0.95]");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  for (int i = 0; i < argc; ++i) ctx.command_line += (i ? " " : "") + std::string(argv[i]);

  try {
    ctx.config = ctx.config_path.empty() ? Config::from_string("", "<defaults>") : Config::from_file(ctx.config_path);
    ctx.config.apply_environment();
    if (grid_nodes) ctx.config.set("solver.n_nodes", std::to_string(*grid_nodes));
    if (x_min) ctx.config.set("solver.x_min", format_double(*x_min));
    if (tol) ctx.config.set("solver.tol", format_double(*tol));
    if (ctx.threads > 0) omp_set_num_threads(ctx.threads);

    ctx.out_dir = out_dir;
    std::filesystem::create_directories(ctx.out_dir);
    ctx.subcommand = app.get_subcommands().front()->get_name();
    write_manifest(ctx);

    if (exp_cmd->parsed()) return cmd_exponents(ctx);
    if (solve_cmd->parsed()) return cmd_solve(ctx, solve_flags);
    if (spec_cmd->parsed()) return cmd_spectrum(ctx, spec_flags);
    if (sim_cmd->parsed()) return cmd_simulate(ctx, sim_flags);
    if (mix_cmd->parsed()) return cmd_mixture(ctx, mix_flags);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  } catch (const DomainError& e) {
    std::fprintf(stderr, "invalid input: %s\n", e.what());
    return kConfigError;
  } catch (const ConvergenceError& e) {
    std::fprintf(stderr, "no convergence: %s\n", e.what());
    return kNonConvergence;
  } catch (const DivergenceError& e) {
    std::fprintf(stderr, "divergence: %s\n", e.what());
    return kNonConvergence;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kFailure;
  }
  return kFailure;
}
