#pragma once

#include "ef1po/market.hpp"

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ef1po {

struct SearchBudget {
  /// Subdivision depth: the guiding grid has 2^depth segments per edge.
  std::size_t depth = 3;
  /// Maximum number of weight vectors tested exactly.
  std::uint64_t max_candidates = 1'000'000;
  /// Wall-clock cap; zero disables it.
  std::chrono::milliseconds wall{60'000};
};

/// Agents that are (weighted) price envy-free in some optimal allocation
/// at the given shrunk weights, with one witness allocation per member.
struct ColorSet {
  std::vector<bool> member;
  std::vector<std::optional<Allocation>> witness;
  std::vector<Allocation> optima;

  bool all() const;
  bool empty() const;
  /// Lowest-index member with w_i > 0, if any.
  std::optional<Index> label(std::span<const Rat> w) const;
};

/// Agent i is (weighted) price envy-free in y when p(y_i)/a_i <= p(y_k)/a_k
/// for every k.
bool price_envy_free(const PriceVector& p, const Allocation& y, std::span<const Rat> alpha, Index agent);

ColorSet kkm_colors(const Instance& inst, const ShrunkWeights& sw, std::span<const Rat> alpha);
ColorSet kkm_colors(const Instance& inst, std::span<const Rat> w, const Rat& tau, std::span<const Rat> alpha);

/// w = (w' - tau) / (1 - n tau)
std::vector<Rat> unshrink(const ShrunkWeights& sw);

struct WeightSearchResult {
  std::vector<Rat> w;  // simplex point
  ShrunkWeights shrunk;
  std::vector<Allocation> witnesses;  // one per agent
  std::string stage;                  // "grid", "vertex", "balanced" or "mixed"
  std::uint64_t candidates = 0;       // weight vectors tested
};

/// Looks for a rational w at which every agent is colored. Tests, in
/// order: the points of a regular simplex grid, the vertices of the
/// tightness arrangement (closest to a fully labeled grid cell first),
/// balance points of allocations met on the way, and mixed systems that
/// pair tightness with price equalities. Returns nothing when the budget
/// runs out first.
std::optional<WeightSearchResult> find_weights(const Instance& inst, const Rat& tau, std::span<const Rat> alpha,
                                               const SearchBudget& budget = {});

/// Vertices of the tightness arrangement inside the shrunk simplex, as
/// shrunk weight vectors, in generation order. Each vertex solves n - 1
/// independent equations drawn from w'_a c_aj = w'_b c_bj (with j tight
/// for both) and w'_i = tau, together with sum w' = 1.
std::vector<std::vector<Rat>> arrangement_vertices(const Instance& inst, const Rat& tau,
                                                   std::uint64_t budget = 10'000'000);

struct Cell {
  std::vector<Rat> w;  // simplex point inside the face
  TightGraph graph;
};

/// One representative per distinct tight graph over the faces of the
/// tightness arrangement: its vertices and the centroids of vertex sets
/// sharing a tight agent for every chore. Throws BudgetExceeded beyond
/// `budget` vertex subsets.
std::vector<Cell> enumerate_cells(const Instance& inst, const Rat& tau, std::uint64_t budget = 10'000'000);

/// First allocation in lexicographic owner order that is weighted EF1 and
/// fPO. Requires positive costs. Throws BudgetExceeded when n^m > budget.
Allocation solve_bruteforce(const Instance& inst, std::uint64_t budget = 10'000'000);

}  // namespace ef1po
