#include "ef1po/instance.hpp"

#include "ef1po/error.hpp"

#include <algorithm>

namespace ef1po {

Instance::Instance(CostMatrix costs, std::vector<Rat> entitlements)
    : n_(costs.size()), costs_(std::move(costs)), entitlements_(std::move(entitlements)) {
  if (n_ == 0) throw InvalidInput("instance needs at least one agent");
  m_ = costs_.front().size();
  for (const auto& row : costs_) {
    if (row.size() != m_) throw InvalidInput("cost matrix rows differ in length");
    for (const auto& c : row) {
      if (c < 0) throw InvalidInput("negative cost " + to_string(c));
    }
  }
  if (entitlements_.empty()) entitlements_.assign(n_, Rat(1));
  if (entitlements_.size() != n_) throw InvalidInput("entitlements must have one entry per agent");
  for (const auto& a : entitlements_) {
    if (a <= 0) throw InvalidInput("entitlement must be positive, got " + to_string(a));
  }
}

Instance Instance::empty(std::size_t agents, std::vector<Rat> entitlements) {
  return Instance(CostMatrix(agents), std::move(entitlements));
}

bool Instance::all_costs_positive() const {
  for (const auto& row : costs_)
    for (const auto& c : row)
      if (c <= 0) return false;
  return true;
}

bool Instance::unit_entitlements() const {
  return std::all_of(entitlements_.begin(), entitlements_.end(),
                     [](const Rat& a) { return a == 1; });
}

void Instance::require_positive() const {
  if (!all_costs_positive()) throw InvalidInput("operation requires strictly positive costs");
}

Rat Instance::max_cost() const {
  Rat best = 0;
  for (const auto& row : costs_)
    for (const auto& c : row) best = std::max(best, c);
  return best;
}

Rat Instance::min_cost() const {
  if (m_ == 0) return 0;
  Rat best = costs_[0][0];
  for (const auto& row : costs_)
    for (const auto& c : row) best = std::min(best, c);
  return best;
}

Rat Instance::min_entitlement() const {
  return *std::min_element(entitlements_.begin(), entitlements_.end());
}

Instance Instance::with_entitlements(std::vector<Rat> entitlements) const {
  return Instance(costs_, std::move(entitlements));
}

Allocation::Allocation(std::size_t agents, std::size_t chores, Index agent)
    : n_(agents), owner_(chores, agent) {
  if (agents == 0) throw InvalidInput("allocation needs at least one agent");
  if (chores > 0 && agent >= agents) throw InvalidInput("agent index out of range");
}

Allocation Allocation::from_owners(std::size_t agents, std::vector<Index> owners) {
  if (agents == 0) throw InvalidInput("allocation needs at least one agent");
  for (Index a : owners) {
    if (a >= agents) throw InvalidInput("agent index out of range");
  }
  Allocation x;
  x.n_ = agents;
  x.owner_ = std::move(owners);
  return x;
}

Allocation Allocation::from_bundles(std::size_t chores, const std::vector<Bundle>& bundles) {
  if (bundles.empty()) throw InvalidInput("allocation needs at least one bundle");
  std::vector<Index> owner(chores, bundles.size());
  for (Index i = 0; i < bundles.size(); ++i) {
    for (Index j : bundles[i]) {
      if (j >= chores) throw InvalidInput("chore index out of range");
      if (owner[j] != bundles.size()) throw InvalidInput("bundles are not disjoint");
      owner[j] = i;
    }
  }
  for (Index o : owner) {
    if (o == bundles.size()) throw InvalidInput("bundles do not cover every chore");
  }
  return from_owners(bundles.size(), std::move(owner));
}

void Allocation::assign(Index chore, Index agent) {
  if (chore >= owner_.size() || agent >= n_) throw InvalidInput("index out of range");
  owner_[chore] = agent;
}

Bundle Allocation::bundle(Index agent) const {
  Bundle b;
  for (Index j = 0; j < owner_.size(); ++j)
    if (owner_[j] == agent) b.push_back(j);
  return b;
}

std::vector<Bundle> Allocation::bundles() const {
  std::vector<Bundle> out(n_);
  for (Index j = 0; j < owner_.size(); ++j) out[owner_[j]].push_back(j);
  return out;
}

void require_compatible(const Instance& inst, const Allocation& x) {
  if (x.agents() != inst.agents() || x.chores() != inst.chores()) {
    throw InvalidInput("allocation shape does not match the instance");
  }
}

Rat bundle_price(const PriceVector& p, std::span<const Index> bundle) {
  Rat total = 0;
  for (Index j : bundle) total += p[j];
  return total;
}

Rat hat_price(const PriceVector& p, std::span<const Index> bundle) {
  if (bundle.empty()) return 0;
  Rat total = 0;
  Rat top = p[bundle.front()];
  for (Index j : bundle) {
    total += p[j];
    top = std::max(top, p[j]);
  }
  return total - top;
}

}  // namespace ef1po
