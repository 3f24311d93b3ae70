#include "ef1po/solver.hpp"

#include "ef1po/checks.hpp"
#include "ef1po/error.hpp"

#include <deque>
#include <limits>
#include <sstream>

namespace ef1po {
namespace {

constexpr std::size_t kUnreached = std::numeric_limits<std::size_t>::max();

std::vector<bool> unmatched_agents(const ReducedGraph& h, const RValues& rv, const Allocation& x) {
  std::vector<bool> unmatched = rv.in_top;
  for (Index j : h.hub) unmatched[x.owner(j)] = false;
  return unmatched;
}

Rat normalized_price(const PriceVector& p, const Bundle& bundle, const Rat& alpha) {
  return bundle_price(p, bundle) / alpha;
}

}  // namespace

RValues r_values(const ReducedGraph& h, const PriceVector& p, std::span<const Rat> alpha) {
  const std::size_t n = h.agents();
  if (alpha.size() != n) throw InvalidInput("entitlements must have one entry per agent");
  RValues rv;
  rv.r.assign(n, Rat(0));
  for (Index j = 0; j < h.forced.size(); ++j) {
    if (h.forced[j]) rv.r[*h.forced[j]] += p[j];
  }
  for (Index i = 0; i < n; ++i) rv.r[i] /= alpha[i];
  rv.r_max = n == 0 ? Rat(0) : *std::max_element(rv.r.begin(), rv.r.end());
  rv.in_top.assign(n, false);
  for (Index i = 0; i < n; ++i) {
    if (rv.r[i] == rv.r_max) {
      rv.top.push_back(i);
      rv.in_top[i] = true;
    }
  }
  return rv;
}

std::vector<std::optional<Index>> covering_matching(const ReducedGraph& h, const std::vector<bool>& avoid,
                                                    const std::vector<bool>& allowed) {
  const std::size_t n = h.agents();
  std::vector<std::optional<Index>> chore_match(h.chore_agents.size());
  std::vector<std::optional<Index>> agent_match(n);
  std::vector<bool> visited;

  auto augment = [&](auto&& self, Index chore) -> bool {
    for (Index a : h.neighbors(chore)) {
      if (!allowed.empty() && !allowed[a]) continue;
      if (visited[a]) continue;
      visited[a] = true;
      if (!agent_match[a] || self(self, *agent_match[a])) {
        agent_match[a] = chore;
        chore_match[chore] = a;
        return true;
      }
    }
    return false;
  };

  for (Index j : h.hub) {
    if (!avoid.empty() && avoid[j]) continue;
    visited.assign(n, false);
    if (!augment(augment, j)) {
      throw InvariantViolation("no matching covers chore " + std::to_string(j + 1) + " of the reduced graph");
    }
  }
  return chore_match;
}

Levels levels_and_potential(const ReducedGraph& h, const RValues& rv, const Allocation& x) {
  const std::size_t n = h.agents();
  Levels lv;
  lv.agent.assign(n, kUnreached);
  lv.chore.assign(h.chore_agents.size(), std::nullopt);
  lv.critical.assign(n, {});

  std::deque<Index> queue;
  const auto unmatched = unmatched_agents(h, rv, x);
  for (Index i = 0; i < n; ++i) {
    if (unmatched[i]) {
      lv.agent[i] = 0;
      queue.push_back(i);
    }
  }
  while (!queue.empty()) {
    const Index a = queue.front();
    queue.pop_front();
    for (Index j : h.agent_hub[a]) {
      const Index holder = x.owner(j);
      if (holder == a || lv.agent[holder] != kUnreached) continue;
      lv.agent[holder] = lv.agent[a] + 1;
      queue.push_back(holder);
    }
  }
  for (Index i = 0; i < n; ++i) {
    if (lv.agent[i] == kUnreached) {
      throw InvariantViolation("agent " + std::to_string(i + 1) + " is not reachable by an alternating path");
    }
  }
  for (Index j : h.hub) {
    const Index holder = x.owner(j);
    std::size_t best = kUnreached;
    for (Index a : h.neighbors(j)) {
      if (a != holder) best = std::min(best, lv.agent[a] + 1);
    }
    lv.chore[j] = best;
    if (best == lv.agent[holder]) lv.critical[holder].push_back(j);
  }
  for (Index i = 0; i < n; ++i) {
    lv.phi += n * (n - lv.agent[i]) + lv.critical[i].size();
  }
  return lv;
}

bool invariants_hold(const ReducedGraph& h, const RValues& rv, const PriceVector& p,
                     std::span<const Rat> alpha, const Allocation& x) {
  std::vector<std::size_t> hub_count(h.agents(), 0);
  for (Index j : h.hub) ++hub_count[x.owner(j)];
  const auto bundles = x.bundles();
  for (Index i = 0; i < h.agents(); ++i) {
    if (rv.in_top[i] && hub_count[i] > 1) return false;
    if (normalized_price(p, bundles[i], alpha[i]) < rv.r_max) return false;
  }
  return true;
}

Allocation initial_allocation(const TightGraph& g, const ReducedGraph& h, const RValues& rv,
                              std::span<const Rat> alpha, std::span<const Allocation> witnesses) {
  const std::size_t n = g.agents;
  const std::size_t m = g.chores();
  // Gamma_H(N \ R): shared chores with a tight agent outside R.
  std::vector<bool> gamma(m, false);
  for (Index j : h.hub) {
    for (Index a : h.neighbors(j)) {
      if (!rv.in_top[a]) gamma[j] = true;
    }
  }
  const auto matching = covering_matching(h, gamma, rv.in_top);

  auto build = [&](const Allocation* witness) {
    std::vector<Index> owner(m, 0);
    for (Index j = 0; j < m; ++j) {
      if (h.forced[j]) {
        owner[j] = *h.forced[j];
      } else if (gamma[j]) {
        if (witness && !rv.in_top[witness->owner(j)]) {
          owner[j] = witness->owner(j);
        } else {
          for (Index a : h.neighbors(j)) {
            if (!rv.in_top[a]) {
              owner[j] = a;
              break;
            }
          }
        }
      } else {
        owner[j] = *matching[j];
      }
    }
    return Allocation::from_owners(n, std::move(owner));
  };

  for (const auto& y : witnesses) {
    if (!is_optimal(y, g)) continue;
    Allocation x = build(&y);
    if (invariants_hold(h, rv, g.prices, alpha, x)) return x;
  }
  Allocation x = build(nullptr);
  if (invariants_hold(h, rv, g.prices, alpha, x)) return x;
  throw InvariantViolation("no witness yields an initial allocation satisfying (I1) and (I2)");
}

std::optional<AlternatingPath> shortest_alternating_path(const ReducedGraph& h, const RValues& rv,
                                                         const PriceVector& p, std::span<const Rat> alpha,
                                                         const Allocation& x) {
  const std::size_t n = h.agents();
  const auto bundles = x.bundles();
  std::vector<bool> violator(n, false);
  bool any = false;
  for (Index i = 0; i < n; ++i) {
    violator[i] = hat_price(p, bundles[i]) / alpha[i] > rv.r_max;
    any = any || violator[i];
  }
  if (!any) return std::nullopt;

  std::vector<std::size_t> dist(n, kUnreached);
  std::vector<std::optional<Index>> via(n);  // chore used to reach the agent
  std::vector<Index> parent(n, 0);
  std::deque<Index> queue;
  const auto unmatched = unmatched_agents(h, rv, x);
  for (Index i = 0; i < n; ++i) {
    if (unmatched[i]) {
      dist[i] = 0;
      queue.push_back(i);
    }
  }
  while (!queue.empty()) {
    const Index a = queue.front();
    queue.pop_front();
    for (Index j : h.agent_hub[a]) {
      const Index holder = x.owner(j);
      if (holder == a || dist[holder] != kUnreached) continue;
      dist[holder] = dist[a] + 1;
      via[holder] = j;
      parent[holder] = a;
      queue.push_back(holder);
    }
  }
  std::optional<Index> target;
  for (Index i = 0; i < n; ++i) {
    if (violator[i] && dist[i] != kUnreached && (!target || dist[i] < dist[*target])) target = i;
  }
  if (!target) throw InvariantViolation("no alternating path reaches a violator");

  if (dist[*target] == 0) {
    throw InvariantViolation("violator agent " + std::to_string(*target + 1) + " is unmatched");
  }
  AlternatingPath path;
  for (Index at = *target; dist[at] != 0; at = parent[at]) {
    path.agents.push_back(at);
    path.chores.push_back(*via[at]);
  }
  path.agents.push_back(parent[path.agents.back()]);
  std::reverse(path.agents.begin(), path.agents.end());
  std::reverse(path.chores.begin(), path.chores.end());
  return path;
}

std::uint64_t iteration_bound(std::size_t agents) {
  const std::uint64_t n = agents;
  return n * n * n + n * (n - (n > 0 ? 1 : 0));
}

SolverRun find_pef1(const TightGraph& g, const ReducedGraph& h, const RValues& rv,
                    std::span<const Rat> alpha, Allocation start) {
  const PriceVector& p = g.prices;
  SolverRun run;
  run.start = start;
  run.allocation = std::move(start);
  Allocation& x = run.allocation;
  if (!is_optimal(x, g)) throw InvariantViolation("starting allocation is not optimal");
  if (!invariants_hold(h, rv, p, alpha, x)) throw InvariantViolation("starting allocation breaks (I1)/(I2)");

  run.levels.push_back(levels_and_potential(h, rv, x));
  run.phi_start = run.levels.back().phi;
  if (run.phi_start > iteration_bound(g.agents)) {
    throw InvariantViolation("initial potential exceeds n^3 + n(n-1)");
  }

  while (!check_wpef1(p, x, alpha)) {
    auto path = shortest_alternating_path(h, rv, p, alpha, x);
    if (!path) throw InvariantViolation("allocation is not price-EF1 but has no violator");
    const std::size_t len = path->chores.size();

    std::size_t pivot = 0;
    for (std::size_t a = len - 1; a >= 1; --a) {
      Bundle candidate;
      for (Index j : x.bundle(path->agents[a])) {
        if (j != path->chores[a - 1]) candidate.push_back(j);
      }
      candidate.push_back(path->chores[a]);
      if (normalized_price(p, candidate, alpha[path->agents[a]]) <= rv.r_max) {
        pivot = a;
        break;
      }
    }

    run.history.push_back({*path, pivot, run.levels.back().phi});
    for (std::size_t k = pivot; k < len; ++k) x.assign(path->chores[k], path->agents[k]);
    ++run.iterations;

    if (!is_optimal(x, g)) throw InvariantViolation("transfer left the tight graph");
    if (!invariants_hold(h, rv, p, alpha, x)) {
      throw InvariantViolation("(I1)/(I2) broken after iteration " + std::to_string(run.iterations));
    }
    Levels next = levels_and_potential(h, rv, x);
    const Levels& prev = run.levels.back();
    for (Index i = 0; i < g.agents; ++i) {
      if (next.agent[i] < prev.agent[i]) {
        throw InvariantViolation("level of agent " + std::to_string(i + 1) + " decreased");
      }
    }
    for (Index j : h.hub) {
      if (*next.chore[j] < *prev.chore[j]) {
        throw InvariantViolation("level of chore " + std::to_string(j + 1) + " decreased");
      }
    }
    if (next.phi >= prev.phi) throw InvariantViolation("potential did not decrease");
    if (run.iterations > run.phi_start) throw InvariantViolation("iteration count exceeds starting potential");
    run.levels.push_back(std::move(next));
  }
  return run;
}

std::string format_iteration(std::size_t t, const IterationRecord& record) {
  std::ostringstream out;
  out << "iter=" << t << " path=a" << record.path.agents[0] + 1;
  for (std::size_t k = 0; k < record.path.chores.size(); ++k) {
    out << ",c" << record.path.chores[k] + 1 << ",a" << record.path.agents[k + 1] + 1;
  }
  out << " pivot=" << record.pivot << " phi=" << record.phi;
  return out.str();
}

}  // namespace ef1po
