#pragma once

#include "ef1po/solve.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ef1po::cli {

enum ExitCode : int { kCertified = 0, kUsage = 1, kBudget = 2, kCertificationFailure = 3 };

struct GenArgs {
  std::int64_t agents = 2;
  std::int64_t chores = 4;
  std::int64_t max_cost = 10;
  std::uint64_t seed = 0;
  bool entitlements = false;
};

struct SolveArgs {
  std::string file;
  std::string method = "paper";
  std::optional<std::string> tau;
  std::uint64_t seed = 0;
  std::uint64_t budget = kDefaultOracleBudget;
  bool trace = false;
  bool allow_zero = false;
};

struct CheckArgs {
  std::string file;
  std::string allocation;
  std::vector<std::string> properties{"ef1", "po"};
  std::uint64_t budget = kDefaultOracleBudget;
  bool allow_zero = false;
};

struct PerturbArgs {
  std::string file;
  bool info = false;
  std::uint64_t seed = 0;
  bool allow_zero = false;
};

struct BenchArgs {
  std::int64_t trials = 10;
  std::string agents = "2..3";
  std::string chores = "2..6";
  std::int64_t max_cost = 10;
  std::uint64_t seed = 0;
  std::string method = "paper";
  bool entitlements = false;
  std::uint64_t budget = kDefaultOracleBudget;
  unsigned jobs = 1;
};

/// Seeded instance with integer costs uniform in [1, max_cost] and, when
/// requested, entitlements uniform in {1, 2, 3}.
Instance generate_instance(std::size_t agents, std::size_t chores, std::int64_t max_cost, std::uint64_t seed,
                           bool entitlements);

/// "a..b" or "a"; throws InvalidInput otherwise.
std::pair<std::int64_t, std::int64_t> parse_range(const std::string& text);

int cmd_gen(const GenArgs& args, std::ostream& out, std::ostream& err);
int cmd_solve(const SolveArgs& args, std::ostream& out, std::ostream& err);
int cmd_check(const CheckArgs& args, std::ostream& out, std::ostream& err);
int cmd_perturb(const PerturbArgs& args, std::ostream& out, std::ostream& err);
int cmd_bench(const BenchArgs& args, std::ostream& out, std::ostream& err);

}  // namespace ef1po::cli
