#include "commands.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  using namespace ef1po::cli;
  CLI::App app{"Exact EF1 + PO chore division: solve, check, perturb, generate, benchmark"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a random instance with integer costs");
  gen_cmd->add_option("--agents", gen.agents, "Number of agents")->required();
  gen_cmd->add_option("--chores", gen.chores, "Number of chores")->required();
  gen_cmd->add_option("--max-cost", gen.max_cost, "Costs are uniform in [1, C]")->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed, "Random seed")->capture_default_str();
  gen_cmd->add_flag("--entitlements", gen.entitlements, "Draw entitlements from {1, 2, 3}");

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Compute a certified (weighted) EF1 and PO allocation");
  solve_cmd->add_option("file", solve.file, "Instance JSON")->required();
  solve_cmd->add_option("--method", solve.method, "paper | bruteforce | cells")
      ->check(CLI::IsMember({"paper", "bruteforce", "cells"}))
      ->capture_default_str();
  solve_cmd->add_option("--tau", solve.tau, "Shrinking parameter as p/q");
  solve_cmd->add_option("--seed", solve.seed, "Perturbation seed")->capture_default_str();
  solve_cmd->add_option("--budget", solve.budget, "Ceiling on n^m for exhaustive oracles")->capture_default_str();
  solve_cmd->add_flag("--trace", solve.trace, "Print one line per transfer iteration to stderr");
  solve_cmd->add_flag("--allow-zero", solve.allow_zero, "Accept zero costs and preprocess them");

  CheckArgs check;
  auto* check_cmd = app.add_subcommand("check", "Verify properties of an allocation");
  check_cmd->add_option("file", check.file, "Instance JSON")->required();
  check_cmd->add_option("--allocation", check.allocation, "JSON with 'bundles' (and a certificate for pef1)")
      ->required();
  check_cmd->add_option("--properties", check.properties, "Comma-separated: ef1,wef1,pef1,po,fpo")
      ->delimiter(',');
  check_cmd->add_option("--budget", check.budget, "Ceiling on n^m for the PO oracle")->capture_default_str();
  check_cmd->add_flag("--allow-zero", check.allow_zero, "Accept zero costs");

  PerturbArgs perturb;
  auto* perturb_cmd = app.add_subcommand("perturb", "Print a certified perturbation or threshold report");
  perturb_cmd->add_option("file", perturb.file, "Instance JSON")->required();
  perturb_cmd->add_flag("--info", perturb.info, "Print delta, delta', epsilon bounds, eta and the prime table");
  perturb_cmd->add_option("--seed", perturb.seed, "Perturbation seed")->capture_default_str();
  perturb_cmd->add_flag("--allow-zero", perturb.allow_zero, "Accept zero costs and preprocess them");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Solve random instances and print a CSV summary");
  bench_cmd->add_option("--trials", bench.trials, "Number of instances")->capture_default_str();
  bench_cmd->add_option("--agents", bench.agents, "Agent range a..b")->capture_default_str();
  bench_cmd->add_option("--chores", bench.chores, "Chore range c..d")->capture_default_str();
  bench_cmd->add_option("--max-cost", bench.max_cost, "Costs are uniform in [1, C]")->capture_default_str();
  bench_cmd->add_option("--seed", bench.seed, "Random seed")->capture_default_str();
  bench_cmd->add_option("--method", bench.method, "paper | bruteforce | cells")
      ->check(CLI::IsMember({"paper", "bruteforce", "cells"}))
      ->capture_default_str();
  bench_cmd->add_flag("--entitlements", bench.entitlements, "Draw entitlements from {1, 2, 3}");
  bench_cmd->add_option("--budget", bench.budget, "Ceiling on n^m for exhaustive oracles")->capture_default_str();
  bench_cmd->add_option("--jobs", bench.jobs, "Worker threads")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  if (*gen_cmd) return cmd_gen(gen, std::cout, std::cerr);
  if (*solve_cmd) return cmd_solve(solve, std::cout, std::cerr);
  if (*check_cmd) return cmd_check(check, std::cout, std::cerr);
  if (*perturb_cmd) return cmd_perturb(perturb, std::cout, std::cerr);
  return cmd_bench(bench, std::cout, std::cerr);
}
