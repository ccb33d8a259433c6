// remest: threshold-policy analytics, trade-off curves, and simulation for
// real-time transmission of symmetric integer Markov sources.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "remest/commands.hpp"
#include "remest/errors.hpp"
#include "remest/version.hpp"

namespace {

void add_model_flags(CLI::App* cmd, remest::RunConfig& cfg, std::string& tail_spec) {
  cmd->add_option("--config", "config file (key = value document; loaded before flags)")
      ->expected(1);
  cmd->add_option("--p", cfg.source.p, "birth-death step probability");
  cmd->add_option("--tail", tail_spec, "banded source tail, e.g. 0.4,0.2,0.1");
  cmd->add_option("--distortion", cfg.distortion.kind,
                  "distortion kind: absolute|hamming|power|table");
  cmd->add_option("--r", cfg.distortion.exponent, "exponent for power distortion");
  cmd->add_option("--beta", cfg.beta, "discount factor in (0,1]; 1 = long-run average");
  cmd->add_option("--seed", cfg.seed, "random seed");
  cmd->add_option("--workers", cfg.workers, "worker threads (0 = hardware)");
  cmd->add_option("--format", cfg.format, "output format: text|csv|json");
  cmd->add_option("--out", cfg.out, "output path (default stdout)");
}

std::vector<double> parse_tail(const std::string& spec) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos < spec.size()) {
    std::size_t comma = spec.find(',', pos);
    out.push_back(std::stod(spec.substr(pos, comma - pos)));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

// The config file is applied before CLI11 runs, so flags the user passes
// override it and everything else keeps the file's values.
std::string find_config_arg(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "--config" && i + 1 < argc) return argv[i + 1];
    if (a.rfind("--config=", 0) == 0) return a.substr(9);
  }
  return {};
}

}  // namespace

int main(int argc, char** argv) {
  remest::RunConfig cfg;
  std::string tail_spec;
  remest::VerifyOptions vopt;
  double perturb = 0.0;

  try {
    std::string config_path = find_config_arg(argc, argv);
    if (!config_path.empty()) cfg.apply(remest::parse_config_file(config_path));
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  CLI::App app{"remest " + std::string(remest::kVersion) +
               " - distortion/transmission analysis for threshold-sampled Markov sources"};
  app.require_subcommand(1);

  auto* table = app.add_subcommand("table", "(k, D, N, lambda) table for a threshold range");
  add_model_flags(table, cfg, tail_spec);
  table->add_option("--k-min", cfg.k_min, "first threshold");
  table->add_option("--k-max", cfg.k_max, "last threshold");

  auto* curve = app.add_subcommand("curve", "distortion-transmission curve (vertices + samples)");
  add_model_flags(curve, cfg, tail_spec);
  curve->add_option("--k-max", cfg.k_max, "deepest vertex threshold");
  curve->add_option("--samples", cfg.samples, "dense sample count");

  auto* lagrange =
      app.add_subcommand("lagrange", "optimal Lagrangian cost curve (breakpoints + samples)");
  add_model_flags(lagrange, cfg, tail_spec);
  lagrange->add_option("--k-max", cfg.k_max, "number of breakpoints");
  lagrange->add_option("--lambda", cfg.lambda, "extend the curve to cover this multiplier");
  lagrange->add_option("--samples", cfg.samples, "dense sample count");

  auto* solve = app.add_subcommand("solve", "optimal strategy for a transmission budget");
  add_model_flags(solve, cfg, tail_spec);
  solve->add_option("--alpha", cfg.alpha, "transmission budget in (0,1)");

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo transmitter-receiver loop");
  add_model_flags(simulate, cfg, tail_spec);
  simulate->add_option("--strategy", cfg.strategy,
                       "threshold:K | bernoulli:K,THETA | steering:K,THETA | timesharing:K,A,B");
  simulate->add_option("--horizon", cfg.horizon, "steps per replicate (0 = pick from beta)");
  simulate->add_option("--replicates", cfg.replicates, "independent replicates");
  simulate->add_option("--trace", cfg.trace, "write replicate-0 trajectory CSV here");

  auto* verify = app.add_subcommand("verify", "run the cross-module verification suite");
  add_model_flags(verify, cfg, tail_spec);
  verify->add_flag("--quick", vopt.quick, "skip the slow suites");
  verify->add_option("--table-k-max", vopt.table_k_max, "reference table depth (-1 = empty grid)");
  auto* pert = verify->add_option("--inject-perturbation", perturb,
                                  "test hook: offset one computed value by this much");

  CLI11_PARSE(app, argc, argv);

  try {
    if (!tail_spec.empty()) {
      cfg.source.kind = "banded";
      cfg.source.tail = parse_tail(tail_spec);
    }
    if (table->parsed()) return remest::cmd_table(cfg, std::cout, std::cerr);
    if (curve->parsed()) return remest::cmd_curve(cfg, std::cout, std::cerr);
    if (lagrange->parsed()) return remest::cmd_lagrange(cfg, std::cout, std::cerr);
    if (solve->parsed()) return remest::cmd_solve(cfg, std::cout, std::cerr);
    if (simulate->parsed()) return remest::cmd_simulate(cfg, std::cout, std::cerr);
    if (verify->parsed()) {
      if (pert->count() > 0) vopt.perturb = perturb;
      if (cfg.seed != 1) vopt.seed = cfg.seed;
      vopt.workers = cfg.workers;
      return remest::cmd_verify(cfg, vopt, std::cout, std::cerr);
    }
  } catch (const remest::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const remest::DomainError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const remest::AssumptionError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
