#pragma once

#include "ef1po/market.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ef1po {

/// r_i = sum of p_j / alpha_i over degree-one tight chores of agent i.
struct RValues {
  std::vector<Rat> r;
  Rat r_max;
  std::vector<Index> top;    // R, ascending
  std::vector<bool> in_top;  // membership in R
};

RValues r_values(const ReducedGraph& h, const PriceVector& p, std::span<const Rat> alpha);

/// Per M_H chore, the agent it is matched to. Covers every M_H chore not
/// in `avoid`, using only agents in `allowed` (all agents when empty).
/// Augmenting paths explore chores and agents in ascending order. Throws
/// InvariantViolation when no covering matching exists.
std::vector<std::optional<Index>> covering_matching(const ReducedGraph& h, const std::vector<bool>& avoid,
                                                    const std::vector<bool>& allowed = {});

/// Agent and chore levels plus the potential
/// Phi = sum_i n (n - level(i)) + |critical chores of i|.
struct Levels {
  std::vector<std::size_t> agent;
  std::vector<std::optional<std::size_t>> chore;  // set for M_H chores only
  std::vector<std::vector<Index>> critical;       // per agent
  std::uint64_t phi = 0;
};

/// Breadth-first levels over alternating paths from the unmatched agents.
/// Throws InvariantViolation when an agent is unreachable.
Levels levels_and_potential(const ReducedGraph& h, const RValues& rv, const Allocation& x);

/// (I1) and (I2) in their entitlement-normalized form.
bool invariants_hold(const ReducedGraph& h, const RValues& rv, const PriceVector& p,
                     std::span<const Rat> alpha, const Allocation& x);

/// Optimal allocation built from forced chores, the witness's placement of
/// chores adjacent to non-R agents, and a covering matching onto R. Each
/// witness is tried in turn; throws InvariantViolation when none yields (I1)
/// and (I2).
Allocation initial_allocation(const TightGraph& g, const ReducedGraph& h, const RValues& rv,
                              std::span<const Rat> alpha, std::span<const Allocation> witnesses);

struct AlternatingPath {
  std::vector<Index> agents;  // i_0 .. i_l
  std::vector<Index> chores;  // j_1 .. j_l, with j_k held by i_k
};

/// A shortest path from an unmatched agent to a violator, or nothing when
/// there is no violator. Ties go to the lowest-index violator and to
/// first discovery in ascending breadth-first order.
std::optional<AlternatingPath> shortest_alternating_path(const ReducedGraph& h, const RValues& rv,
                                                         const PriceVector& p, std::span<const Rat> alpha,
                                                         const Allocation& x);

struct IterationRecord {
  AlternatingPath path;
  std::size_t pivot = 0;
  std::uint64_t phi = 0;  // before the transfer
};

struct SolverRun {
  Allocation start;
  Allocation allocation;
  std::size_t iterations = 0;
  std::uint64_t phi_start = 0;
  std::vector<IterationRecord> history;
  std::vector<Levels> levels;  // one entry per time step, final state included
};

/// n^3 + n(n - 1)
std::uint64_t iteration_bound(std::size_t agents);

/// Transfers along shortest alternating paths until the allocation is
/// (weighted) price-EF1. Asserts optimality, (I1), (I2), monotone levels and
/// a strictly decreasing potential at every step; a breach throws
/// InvariantViolation.
SolverRun find_pef1(const TightGraph& g, const ReducedGraph& h, const RValues& rv,
                    std::span<const Rat> alpha, Allocation start);

/// "iter=<t> path=a1,c2,a3 pivot=<a> phi=<phi>" with 1-based labels.
std::string format_iteration(std::size_t t, const IterationRecord& record);

}  // namespace ef1po
