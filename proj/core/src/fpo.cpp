#include "ef1po/checks.hpp"
#include "ef1po/error.hpp"

#include <algorithm>

namespace ef1po {
namespace {

// Cheapest way to push one chore from `from` to `to`: the chore of x_from
// minimizing c_to,j / c_from,j.
struct Arc {
  bool present = false;
  Index chore = 0;
  Rat ratio;
};

std::vector<std::vector<Arc>> exchange_graph(const Instance& inst, const Allocation& x) {
  const std::size_t n = inst.agents();
  std::vector<std::vector<Arc>> arcs(n, std::vector<Arc>(n));
  for (Index j = 0; j < inst.chores(); ++j) {
    const Index from = x.owner(j);
    for (Index to = 0; to < n; ++to) {
      if (to == from) continue;
      Rat ratio = inst.cost(to, j) / inst.cost(from, j);
      Arc& arc = arcs[from][to];
      if (!arc.present || ratio < arc.ratio) arc = Arc{true, j, std::move(ratio)};
    }
  }
  return arcs;
}

struct CycleSearch {
  const std::vector<std::vector<Arc>>& arcs;
  Index start = 0;
  std::vector<Index> path;
  std::vector<bool> on_path;

  // Extends the simple path ending at path.back() using only agents > start.
  std::optional<ExchangeCycle> extend(const Rat& product) {
    const Index at = path.back();
    const std::size_t n = arcs.size();
    if (path.size() >= 2 && arcs[at][start].present) {
      Rat closed = product * arcs[at][start].ratio;
      if (closed < 1) {
        ExchangeCycle cycle;
        cycle.agents = path;
        for (std::size_t t = 0; t < path.size(); ++t) {
          cycle.chores.push_back(arcs[path[t]][path[(t + 1) % path.size()]].chore);
        }
        cycle.product = closed;
        return cycle;
      }
    }
    for (Index next = start + 1; next < n; ++next) {
      if (on_path[next] || !arcs[at][next].present) continue;
      path.push_back(next);
      on_path[next] = true;
      auto found = extend(product * arcs[at][next].ratio);
      on_path[next] = false;
      path.pop_back();
      if (found) return found;
    }
    return std::nullopt;
  }
};

}  // namespace

Rat exchange_product(const Instance& inst, const ExchangeCycle& cycle) {
  const std::size_t k = cycle.agents.size();
  if (k < 2 || cycle.chores.size() != k) throw InvalidInput("malformed exchange cycle");
  Rat product = 1;
  for (std::size_t t = 0; t < k; ++t) {
    const Index holder = cycle.agents[t];
    const Index receiver = cycle.agents[(t + 1) % k];
    product *= inst.cost(receiver, cycle.chores[t]) / inst.cost(holder, cycle.chores[t]);
  }
  return product;
}

std::optional<ExchangeCycle> find_improving_cycle(const Instance& inst, const Allocation& x) {
  require_compatible(inst, x);
  inst.require_positive();
  const auto arcs = exchange_graph(inst, x);
  const std::size_t n = inst.agents();
  for (Index s = 0; s < n; ++s) {
    CycleSearch search{arcs, s, {s}, std::vector<bool>(n, false)};
    search.on_path[s] = true;
    if (auto cycle = search.extend(Rat(1))) return cycle;
  }
  return std::nullopt;
}

std::optional<std::vector<Rat>> find_fpo_weights(const Instance& inst, const Allocation& x) {
  require_compatible(inst, x);
  inst.require_positive();
  const std::size_t n = inst.agents();
  const auto arcs = exchange_graph(inst, x);
  // Multiplicative Bellman-Ford from a virtual source joined to every agent
  // with ratio one.
  std::vector<Rat> dist(n, Rat(1));
  for (std::size_t round = 0; round <= n; ++round) {
    bool relaxed = false;
    for (Index i = 0; i < n; ++i) {
      for (Index k = 0; k < n; ++k) {
        if (!arcs[i][k].present) continue;
        Rat through = dist[i] * arcs[i][k].ratio;
        if (through < dist[k]) {
          dist[k] = std::move(through);
          relaxed = true;
        }
      }
    }
    if (!relaxed) {
      std::vector<Rat> w(n);
      Rat top = 0;
      for (Index i = 0; i < n; ++i) {
        w[i] = 1 / dist[i];
        top = std::max(top, w[i]);
      }
      for (auto& wi : w) wi /= top;
      return w;
    }
  }
  return std::nullopt;
}

bool weights_support(const Instance& inst, const Allocation& x, std::span<const Rat> weights) {
  require_compatible(inst, x);
  if (weights.size() != inst.agents()) return false;
  for (Index j = 0; j < inst.chores(); ++j) {
    const Index i = x.owner(j);
    const Rat mine = weights[i] * inst.cost(i, j);
    for (Index k = 0; k < inst.agents(); ++k) {
      if (weights[k] * inst.cost(k, j) < mine) return false;
    }
  }
  return true;
}

CheckReport check_fpo(const Instance& inst, const Allocation& x) {
  CheckReport report{"fpo", true, std::nullopt};
  if (auto cycle = find_improving_cycle(inst, x)) {
    report.verdict = false;
    report.witness = std::move(*cycle);
    return report;
  }
  auto w = find_fpo_weights(inst, x);
  if (!w || !weights_support(inst, x, *w)) {
    throw InvariantViolation("no improving cycle found but weight certificate search failed");
  }
  report.witness = std::move(*w);
  return report;
}

}  // namespace ef1po
