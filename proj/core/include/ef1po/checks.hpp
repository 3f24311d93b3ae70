#pragma once

#include "ef1po/instance.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace ef1po {

/// Default ceiling on n^m for exhaustive allocation enumeration.
inline constexpr std::uint64_t kDefaultOracleBudget = 10'000'000;

/// n^m, saturating at UINT64_MAX.
std::uint64_t allocation_count(std::size_t agents, std::size_t chores);

/// Result of stripping zero-cost chores.
struct ZeroCostReduction {
  Instance reduced;
  /// (original chore, agent) for every removed chore, chores ascending.
  std::vector<std::pair<Index, Index>> forced;
  /// reduced chore index -> original chore index
  std::vector<Index> kept;

  /// Maps an allocation of `reduced` back to the original chores and
  /// reattaches the forced assignments.
  Allocation expand(const Allocation& reduced_allocation) const;
  /// Drops forced chores from an allocation of the original instance.
  Allocation restrict(const Allocation& original) const;
};

/// Assigns each chore with some zero cost to its lowest-index zero-cost
/// agent and removes it.
ZeroCostReduction preprocess_zero_costs(const Instance& raw);

Rat bundle_cost(const Instance& inst, Index agent, std::span<const Index> bundle);

/// Weighted EF1 with the instance's entitlements (plain EF1 when they are
/// all one). A failed report carries the violating EnvyPair.
CheckReport check_wef1(const Instance& inst, const Allocation& x);
CheckReport check_wef1(const Instance& inst, const Allocation& x,
                       std::span<const Rat> entitlements);
/// Unweighted EF1 regardless of the instance's entitlements.
CheckReport check_ef1(const Instance& inst, const Allocation& x);

/// max_i phat(x_i)/alpha_i <= min_k p(x_k)/alpha_k. A failed report carries
/// (argmax, argmin) as an EnvyPair.
CheckReport check_wpef1(const PriceVector& p, const Allocation& x,
                        std::span<const Rat> entitlements);

/// Exhaustive Pareto-dominance search. Throws BudgetExceeded when n^m is
/// above `budget`. A failed report carries the dominating allocation.
CheckReport check_po_bruteforce(const Instance& inst, const Allocation& x,
                                std::uint64_t budget = kDefaultOracleBudget);

/// fPO via the absence of an improving exchange cycle, found by enumerating
/// simple agent cycles. Requires positive costs. A failed report carries the
/// ExchangeCycle; a passing one carries the weight certificate from
/// find_fpo_weights.
CheckReport check_fpo(const Instance& inst, const Allocation& x);

/// Enumerates simple cycles of the exchange graph and returns one whose
/// ratio product is below one, if any.
std::optional<ExchangeCycle> find_improving_cycle(const Instance& inst, const Allocation& x);

/// Multiplicative shortest-path potentials on the exchange graph. Returns
/// weights (max entry 1) under which every chore sits at an agent minimizing
/// w_k c_kj, or nothing when an improving cycle exists.
std::optional<std::vector<Rat>> find_fpo_weights(const Instance& inst, const Allocation& x);

/// True when every chore j in x_i satisfies w_i c_ij <= w_k c_kj for all k.
bool weights_support(const Instance& inst, const Allocation& x, std::span<const Rat> weights);

/// Product of c_{next agent, chore} / c_{holder, chore} around the cycle.
Rat exchange_product(const Instance& inst, const ExchangeCycle& cycle);

}  // namespace ef1po
