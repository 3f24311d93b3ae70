#pragma once

#include "ef1po/instance.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace ef1po {

/// Ceiling on the number of simple cycles visited by cycle enumerations.
inline constexpr std::uint64_t kDefaultCycleBudget = 20'000'000;
/// Largest m for which subset sums are enumerated (2^m values per agent).
inline constexpr std::size_t kMaxSubsetChores = 22;
inline constexpr int kPerturbationAttempts = 64;

/// The first k primes in ascending order.
std::vector<std::uint64_t> nth_primes(std::size_t k);

/// A cycle i_1, j_1, i_2, ..., i_l, j_l, i_1 of the complete agent/chore
/// graph, with chores[t] joining agents[t] and agents[(t + 1) % l].
struct BipartiteCycle {
  std::vector<Index> agents;
  std::vector<Index> chores;
  friend bool operator==(const BipartiteCycle&, const BipartiteCycle&) = default;
};

/// prod_t c(agents[t], chores[t]) / c(agents[t+1], chores[t]). Throws
/// InvalidInput unless the cycle has at least two distinct agents and
/// distinct chores.
Rat pi_cycle(const Instance& inst, const BipartiteCycle& cycle);

/// Visits every simple cycle once per orientation and starting agent choice
/// fixed to its smallest agent. `visit(cycle, forward, backward)` receives
/// the two cost products; returning false stops the walk. Throws
/// BudgetExceeded after `budget` cycles.
void for_each_cycle(const Instance& inst, std::uint64_t budget,
                    const std::function<bool(const BipartiteCycle&, const Rat&, const Rat&)>& visit);

struct DegeneracyReport {
  bool verdict = true;
  std::optional<BipartiteCycle> cycle;  // a cycle with product one
  explicit operator bool() const noexcept { return verdict; }
};

DegeneracyReport is_nondegenerate(const Instance& inst,
                                  std::uint64_t budget = kDefaultCycleBudget);

/// An upper bound on a perturbation exponent, kept in the exact form
/// eps < log_base(ratio). `ratio` is absent when the bound is vacuous.
struct EpsBound {
  Rat base;
  std::optional<Rat> ratio;
};

struct Thresholds {
  /// Minimum positive gap between subset costs of one agent. Absent when
  /// every agent has a single subset cost (m = 0).
  std::optional<Rat> delta;
  /// Minimum |A - B| over cycles whose cost products A, B differ.
  std::optional<Rat> delta_prime;
  /// Minimum positive |c_i(S)/a_i - c_i(T)/a_k| over agents i != k.
  std::optional<Rat> delta_weighted;
  EpsBound eps_nondegen;
  EpsBound eps_ef1;
  EpsBound eps_po;
  EpsBound eps_wef1;
  /// q_ij, the (m*i + j)-th prime with 0-based indices.
  std::vector<std::vector<std::uint64_t>> primes;
};

std::optional<Rat> min_subset_gap(const Instance& inst);
std::optional<Rat> min_cycle_gap(const Instance& inst, std::uint64_t budget = kDefaultCycleBudget);
std::optional<Rat> min_weighted_gap(const Instance& inst);

Thresholds thresholds(const Instance& inst, std::uint64_t cycle_budget = kDefaultCycleBudget);

/// A factor bound eta such that multiplying every cost by a factor in
/// (1, 1 + eta) keeps EF1, weighted EF1 and PO from the perturbed instance
/// valid in the original one. Requires positive costs; returns 1 for m = 0.
Rat margin_eta(const Instance& inst);

struct PerturbPlan {
  std::vector<std::vector<Rat>> factors;  // n x m, each in (1, 1 + eta)
  std::uint64_t seed = 0;
  Rat eta;
  int attempts = 0;
  bool certified = false;
};

/// c_ij * factor_ij
Instance apply_plan(const Instance& inst, const PerturbPlan& plan);

/// Draws factors 1 + (k / 2^63) * eta with distinct k from the seed until
/// the perturbed instance is non-degenerate. Throws BudgetExceeded when all
/// attempts produce a degenerate instance.
std::pair<Instance, PerturbPlan> certify_perturbation(const Instance& inst, std::uint64_t seed,
                                                      std::uint64_t cycle_budget = kDefaultCycleBudget);

}  // namespace ef1po
