#include "ef1po/checks.hpp"

#include "ef1po/error.hpp"

#include <algorithm>
#include <limits>

namespace ef1po {

std::uint64_t allocation_count(std::size_t agents, std::size_t chores) {
  std::uint64_t total = 1;
  for (std::size_t j = 0; j < chores; ++j) {
    if (agents != 0 && total > std::numeric_limits<std::uint64_t>::max() / agents) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    total *= agents;
  }
  return total;
}

ZeroCostReduction preprocess_zero_costs(const Instance& raw) {
  const std::size_t n = raw.agents();
  ZeroCostReduction out;
  CostMatrix reduced(n);
  for (Index j = 0; j < raw.chores(); ++j) {
    std::optional<Index> zero_agent;
    for (Index i = 0; i < n && !zero_agent; ++i) {
      if (raw.cost(i, j) == 0) zero_agent = i;
    }
    if (zero_agent) {
      out.forced.emplace_back(j, *zero_agent);
      continue;
    }
    out.kept.push_back(j);
    for (Index i = 0; i < n; ++i) reduced[i].push_back(raw.cost(i, j));
  }
  out.reduced = Instance(std::move(reduced),
                         std::vector<Rat>(raw.entitlements().begin(), raw.entitlements().end()));
  return out;
}

Allocation ZeroCostReduction::expand(const Allocation& reduced_allocation) const {
  if (reduced_allocation.chores() != kept.size()) {
    throw InvalidInput("allocation does not match the reduced instance");
  }
  std::vector<Index> owner(kept.size() + forced.size());
  for (Index r = 0; r < kept.size(); ++r) owner[kept[r]] = reduced_allocation.owner(r);
  for (const auto& [chore, agent] : forced) owner[chore] = agent;
  return Allocation::from_owners(reduced_allocation.agents(), std::move(owner));
}

Allocation ZeroCostReduction::restrict(const Allocation& original) const {
  if (original.chores() != kept.size() + forced.size()) {
    throw InvalidInput("allocation does not match the original instance");
  }
  std::vector<Index> owner;
  owner.reserve(kept.size());
  for (Index j : kept) owner.push_back(original.owner(j));
  return Allocation::from_owners(original.agents(), std::move(owner));
}

Rat bundle_cost(const Instance& inst, Index agent, std::span<const Index> bundle) {
  if (agent >= inst.agents()) throw InvalidInput("agent index out of range");
  Rat total = 0;
  for (Index j : bundle) {
    if (j >= inst.chores()) throw InvalidInput("chore index out of range");
    total += inst.cost(agent, j);
  }
  return total;
}

CheckReport check_wef1(const Instance& inst, const Allocation& x,
                       std::span<const Rat> alpha) {
  require_compatible(inst, x);
  if (alpha.size() != inst.agents()) throw InvalidInput("entitlements must have one entry per agent");
  const std::size_t n = inst.agents();
  const auto bundles = x.bundles();
  CheckReport report{"wef1", true, std::nullopt};
  for (Index i = 0; i < n; ++i) {
    // own[k] = c_i(x_k)
    std::vector<Rat> own(n, Rat(0));
    Rat top = 0;
    for (Index j = 0; j < inst.chores(); ++j) own[x.owner(j)] += inst.cost(i, j);
    for (Index j : bundles[i]) top = std::max(top, inst.cost(i, j));
    const Rat mine = own[i] / alpha[i];
    const Rat mine_up_to_one = (own[i] - top) / alpha[i];
    for (Index k = 0; k < n; ++k) {
      if (k == i) continue;
      const Rat theirs = own[k] / alpha[k];
      if (mine > theirs && mine_up_to_one > theirs) {
        report.verdict = false;
        report.witness = EnvyPair{i, k};
        return report;
      }
    }
  }
  return report;
}

CheckReport check_wef1(const Instance& inst, const Allocation& x) {
  return check_wef1(inst, x, inst.entitlements());
}

CheckReport check_ef1(const Instance& inst, const Allocation& x) {
  const std::vector<Rat> ones(inst.agents(), Rat(1));
  auto report = check_wef1(inst, x, ones);
  report.property = "ef1";
  return report;
}

CheckReport check_wpef1(const PriceVector& p, const Allocation& x,
                        std::span<const Rat> alpha) {
  if (p.size() != x.chores()) throw InvalidInput("price vector length does not match allocation");
  if (alpha.size() != x.agents()) throw InvalidInput("entitlements must have one entry per agent");
  const auto bundles = x.bundles();
  Index worst = 0;
  Index poorest = 0;
  Rat worst_hat = hat_price(p, bundles[0]) / alpha[0];
  Rat least = bundle_price(p, bundles[0]) / alpha[0];
  for (Index i = 1; i < bundles.size(); ++i) {
    Rat h = hat_price(p, bundles[i]) / alpha[i];
    Rat q = bundle_price(p, bundles[i]) / alpha[i];
    if (h > worst_hat) {
      worst_hat = h;
      worst = i;
    }
    if (q < least) {
      least = q;
      poorest = i;
    }
  }
  CheckReport report{"wpef1", worst_hat <= least, std::nullopt};
  if (!report.verdict) report.witness = EnvyPair{worst, poorest};
  return report;
}

namespace {

struct DominanceSearch {
  const Instance& inst;
  std::vector<Rat> target;
  std::vector<Rat> running;
  std::vector<Index> owner;

  bool descend(Index chore) {
    const std::size_t n = inst.agents();
    if (chore == inst.chores()) {
      for (Index i = 0; i < n; ++i)
        if (running[i] < target[i]) return true;
      return false;
    }
    for (Index i = 0; i < n; ++i) {
      running[i] += inst.cost(i, chore);
      if (running[i] <= target[i]) {
        owner[chore] = i;
        if (descend(chore + 1)) return true;
      }
      running[i] -= inst.cost(i, chore);
    }
    return false;
  }
};

}  // namespace

CheckReport check_po_bruteforce(const Instance& inst, const Allocation& x, std::uint64_t budget) {
  require_compatible(inst, x);
  if (allocation_count(inst.agents(), inst.chores()) > budget) {
    throw BudgetExceeded("PO oracle infeasible: n^m exceeds the enumeration budget");
  }
  DominanceSearch search{inst, {}, std::vector<Rat>(inst.agents(), Rat(0)),
                         std::vector<Index>(inst.chores(), 0)};
  for (Index i = 0; i < inst.agents(); ++i) {
    search.target.push_back(bundle_cost(inst, i, x.bundle(i)));
  }
  CheckReport report{"po", true, std::nullopt};
  if (search.descend(0)) {
    report.verdict = false;
    report.witness = Allocation::from_owners(inst.agents(), search.owner);
  }
  return report;
}

}  // namespace ef1po
