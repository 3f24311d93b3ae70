#include "ef1po/market.hpp"

#include "ef1po/error.hpp"

#include <numeric>
#include <string>

namespace ef1po {

Rat tau_bound(const Instance& inst) {
  inst.require_positive();
  if (inst.chores() == 0) return Rat(1, 2 * static_cast<long>(inst.agents()));
  return inst.min_cost() / (2 * Rat(inst.agents()) * inst.max_cost());
}

Rat default_tau(const Instance& inst) { return tau_bound(inst) / 2; }

void require_admissible_tau(const Instance& inst, const Rat& tau) {
  if (tau <= 0 || tau >= tau_bound(inst)) {
    throw InvalidInput("tau " + to_string(tau) + " outside (0, " + to_string(tau_bound(inst)) + ")");
  }
}

void require_simplex_point(std::span<const Rat> w, std::size_t agents) {
  if (w.size() != agents) throw InvalidInput("weight vector needs one entry per agent");
  Rat total = 0;
  for (const auto& wi : w) {
    if (wi < 0) throw InvalidInput("weights must be non-negative");
    total += wi;
  }
  if (total != 1) throw InvalidInput("weights must sum to one");
}

ShrunkWeights shrink(const Instance& inst, std::span<const Rat> w, const Rat& tau) {
  require_admissible_tau(inst, tau);
  require_simplex_point(w, inst.agents());
  ShrunkWeights sw;
  sw.tau = tau;
  const Rat keep = 1 - tau * Rat(inst.agents());
  sw.w.reserve(w.size());
  for (const auto& wi : w) sw.w.push_back(tau + keep * wi);
  return sw;
}

PriceVector dual_prices(const Instance& inst, const ShrunkWeights& sw) {
  PriceVector p;
  p.prices.reserve(inst.chores());
  for (Index j = 0; j < inst.chores(); ++j) {
    Rat best = sw.w[0] * inst.cost(0, j);
    for (Index i = 1; i < inst.agents(); ++i) best = std::min(best, sw.w[i] * inst.cost(i, j));
    p.prices.push_back(std::move(best));
  }
  return p;
}

bool TightGraph::has_edge(Index agent, Index chore) const {
  const auto& row = chore_agents[chore];
  return std::binary_search(row.begin(), row.end(), agent);
}

std::size_t TightGraph::edge_count() const {
  std::size_t total = 0;
  for (const auto& row : chore_agents) total += row.size();
  return total;
}

namespace {

struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t size) : parent(size) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

}  // namespace

TightGraph tight_graph(const Instance& inst, const ShrunkWeights& sw) {
  const std::size_t n = inst.agents();
  const std::size_t m = inst.chores();
  TightGraph g;
  g.agents = n;
  g.shrunk = sw;
  g.prices = dual_prices(inst, sw);
  g.chore_agents.resize(m);
  g.agent_chores.resize(n);
  DisjointSets sets(n + m);
  for (Index j = 0; j < m; ++j) {
    for (Index i = 0; i < n; ++i) {
      if (sw.w[i] * inst.cost(i, j) != g.prices[j]) continue;
      g.chore_agents[j].push_back(i);
      g.agent_chores[i].push_back(j);
      if (!sets.unite(i, n + j)) g.forest = false;
    }
  }
  return g;
}

bool is_optimal(const Allocation& x, const TightGraph& g) {
  if (x.chores() != g.chores() || x.agents() != g.agents) return false;
  for (Index j = 0; j < x.chores(); ++j) {
    if (!g.has_edge(x.owner(j), j)) return false;
  }
  return true;
}

ReducedGraph reduce(const TightGraph& g) {
  ReducedGraph h;
  h.chore_agents = g.chore_agents;
  h.in_hub.assign(g.chores(), false);
  h.forced.assign(g.chores(), std::nullopt);
  h.agent_hub.resize(g.agents);
  for (Index j = 0; j < g.chores(); ++j) {
    const auto& row = g.chore_agents[j];
    if (row.empty()) throw InvariantViolation("chore " + std::to_string(j + 1) + " has no tight agent");
    if (row.size() == 1) {
      h.forced[j] = row.front();
      continue;
    }
    h.hub.push_back(j);
    h.in_hub[j] = true;
    for (Index i : row) h.agent_hub[i].push_back(j);
  }
  if (g.forest && g.agents >= 1 && h.hub.size() > g.agents - 1) {
    throw InvariantViolation("reduced forest has " + std::to_string(h.hub.size()) + " shared chores for " +
                             std::to_string(g.agents) + " agents");
  }
  return h;
}

std::uint64_t enumerate_optima(const TightGraph& g, const std::function<bool(const Allocation&)>& visit,
                               std::uint64_t cap) {
  if (!g.forest) throw InvalidInput("optimal allocations are only enumerated on forest tight graphs");
  const std::size_t m = g.chores();
  std::vector<Index> owner(m);
  std::vector<std::size_t> choice(m, 0);
  for (Index j = 0; j < m; ++j) {
    if (g.chore_agents[j].empty()) throw InvariantViolation("chore without a tight agent");
    owner[j] = g.chore_agents[j].front();
  }
  std::uint64_t count = 0;
  while (true) {
    if (++count > cap) throw BudgetExceeded("more than " + std::to_string(cap) + " optimal allocations");
    if (!visit(Allocation::from_owners(g.agents, owner))) return count;
    // Odometer step, last chore fastest.
    std::size_t j = m;
    while (j > 0) {
      --j;
      if (++choice[j] < g.chore_agents[j].size()) {
        owner[j] = g.chore_agents[j][choice[j]];
        break;
      }
      choice[j] = 0;
      owner[j] = g.chore_agents[j].front();
      if (j == 0) return count;
    }
    if (m == 0) return count;
  }
}

std::vector<Allocation> optimal_allocations(const TightGraph& g, std::uint64_t cap) {
  std::vector<Allocation> out;
  enumerate_optima(g, [&](const Allocation& x) {
    out.push_back(x);
    return true;
  }, cap);
  return out;
}

Rat weighted_social_cost(const Instance& inst, const ShrunkWeights& sw, const Allocation& x) {
  require_compatible(inst, x);
  Rat total = 0;
  for (Index j = 0; j < inst.chores(); ++j) total += sw.w[x.owner(j)] * inst.cost(x.owner(j), j);
  return total;
}

}  // namespace ef1po
