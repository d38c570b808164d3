#include "cli.hpp"

#include <CLI11.hpp>

#include <string>

int main(int argc, char** argv) {
  CLI::App app{
      "Rank-constrained linear propagator fits: closed-form solves, "
      "spectral analysis, kernelized and continuous variants, and "
      "optimality verification."};
  app.require_subcommand(0, 0);

  lrmap::cli::RunConfig config;
  app.add_option("command", config.command,
                 "one of: solve, weighted, dmd, kernel-dmd, continuous, "
                 "verify, sweep")
      ->required();
  app.add_option("--x", config.x_path,
                 "CSV matrix: source snapshots (full series for dmd)");
  app.add_option("--y", config.y_path, "CSV matrix: target snapshots");
  auto* k_opt = app.add_option("-k", config.k, "rank budget, k >= 0");
  app.add_option("-p", config.p_text,
                 "Schatten order: positive real or \"inf\" (default 2)");
  app.add_option("--out", config.out_path, "report file to write (JSON)");
  app.add_option("--seed", config.seed, "RNG seed for oracle runs");
  app.add_option("--rank-rtol", config.rank_rtol,
                 "relative singular-value cutoff (default 1e-12)");
  app.add_option("--kmax", config.kmax, "largest k for sweep");
  app.add_option("--config", config.config_path,
                 "JSON config: weight matrix path, kernel parameters, "
                 "quadrature family");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return lrmap::cli::kUsage;
  }

  config.k_set = k_opt->count() > 0;
  return lrmap::cli::run_and_map_errors(config);
}
