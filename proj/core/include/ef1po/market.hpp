#pragma once

#include "ef1po/instance.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace ef1po {

inline constexpr std::uint64_t kDefaultOptimaCap = 1'000'000;

/// w'_i = tau + (1 - tau n) w_i for a simplex point w.
struct ShrunkWeights {
  std::vector<Rat> w;
  Rat tau;
};

/// c_min / (2 n c_max); admissible shrinking parameters lie strictly below.
Rat tau_bound(const Instance& inst);
/// c_min / (4 n c_max)
Rat default_tau(const Instance& inst);

/// Throws InvalidInput unless 0 < tau < tau_bound(inst).
void require_admissible_tau(const Instance& inst, const Rat& tau);
/// Throws InvalidInput unless w has n non-negative entries summing to one.
void require_simplex_point(std::span<const Rat> w, std::size_t agents);

ShrunkWeights shrink(const Instance& inst, std::span<const Rat> w, const Rat& tau);

/// p_j = min_i w'_i c_ij
PriceVector dual_prices(const Instance& inst, const ShrunkWeights& sw);

/// Bipartite equality graph of p_j = w'_i c_ij.
struct TightGraph {
  std::size_t agents = 0;
  std::vector<std::vector<Index>> chore_agents;  // ascending, per chore
  std::vector<std::vector<Index>> agent_chores;  // ascending, per agent
  PriceVector prices;
  ShrunkWeights shrunk;
  bool forest = true;

  std::size_t chores() const noexcept { return chore_agents.size(); }
  bool has_edge(Index agent, Index chore) const;
  std::size_t edge_count() const;
};

TightGraph tight_graph(const Instance& inst, const ShrunkWeights& sw);

/// Every allocated pair is a tight edge.
bool is_optimal(const Allocation& x, const TightGraph& g);

/// The tight graph with degree-one chores removed.
struct ReducedGraph {
  std::vector<Index> hub;                     // M_H, ascending
  std::vector<bool> in_hub;                   // per chore
  std::vector<std::optional<Index>> forced;   // per chore: the unique tight agent
  std::vector<std::vector<Index>> agent_hub;  // per agent: adjacent M_H chores, ascending
  std::vector<std::vector<Index>> chore_agents;  // tight agents per chore, ascending

  const std::vector<Index>& neighbors(Index chore) const { return chore_agents[chore]; }
  std::size_t agents() const noexcept { return agent_hub.size(); }
};

/// Throws InvariantViolation if a chore has no tight agent, or if a forest
/// yields more than n - 1 chores of degree two or more.
ReducedGraph reduce(const TightGraph& g);

/// Streams the optimal allocations of a forest tight graph in lexicographic
/// order of (chore, agent). `visit` returning false stops the stream.
/// Returns the number of allocations visited. Throws InvalidInput for a
/// non-forest graph and BudgetExceeded beyond `cap` allocations.
std::uint64_t enumerate_optima(const TightGraph& g, const std::function<bool(const Allocation&)>& visit,
                               std::uint64_t cap = kDefaultOptimaCap);
std::vector<Allocation> optimal_allocations(const TightGraph& g, std::uint64_t cap = kDefaultOptimaCap);

/// sum_i w'_i c_i(x_i)
Rat weighted_social_cost(const Instance& inst, const ShrunkWeights& sw, const Allocation& x);

}  // namespace ef1po
