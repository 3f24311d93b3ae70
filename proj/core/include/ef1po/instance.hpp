#pragma once

#include "ef1po/rational.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace ef1po {

using Index = std::size_t;
using Bundle = std::vector<Index>;  // sorted chore indices
using CostMatrix = std::vector<std::vector<Rat>>;

/// A chore division instance: n agents, m chores, additive costs c_ij and
/// positive entitlements alpha_i (all one for the unweighted problem).
///
/// Costs must be non-negative. Everything downstream of zero-cost
/// preprocessing additionally requires strictly positive costs; use
/// `require_positive()` to assert that.
class Instance {
 public:
  Instance() = default;
  explicit Instance(CostMatrix costs, std::vector<Rat> entitlements = {});
  /// Shape-only constructor for m = 0 instances with n agents.
  static Instance empty(std::size_t agents, std::vector<Rat> entitlements = {});

  std::size_t agents() const noexcept { return n_; }
  std::size_t chores() const noexcept { return m_; }
  const Rat& cost(Index agent, Index chore) const { return costs_[agent][chore]; }
  const CostMatrix& costs() const noexcept { return costs_; }
  std::span<const Rat> entitlements() const noexcept { return entitlements_; }
  const Rat& entitlement(Index agent) const { return entitlements_[agent]; }

  bool all_costs_positive() const;
  bool unit_entitlements() const;
  void require_positive() const;

  Rat max_cost() const;  // 0 when m = 0
  Rat min_cost() const;  // 0 when m = 0
  Rat min_entitlement() const;

  Instance with_entitlements(std::vector<Rat> entitlements) const;

  friend bool operator==(const Instance&, const Instance&) = default;

 private:
  std::size_t n_ = 0;
  std::size_t m_ = 0;
  CostMatrix costs_;
  std::vector<Rat> entitlements_;
};

/// A partition of the chores into n bundles, stored as chore -> owner.
class Allocation {
 public:
  Allocation() = default;
  /// Every chore owned by `agent`. For m = 0 this is the all-empty allocation.
  Allocation(std::size_t agents, std::size_t chores, Index agent = 0);
  static Allocation from_owners(std::size_t agents, std::vector<Index> owners);
  /// Throws InvalidInput unless the bundles are disjoint and cover 0..m-1.
  static Allocation from_bundles(std::size_t chores, const std::vector<Bundle>& bundles);

  std::size_t agents() const noexcept { return n_; }
  std::size_t chores() const noexcept { return owner_.size(); }
  Index owner(Index chore) const { return owner_[chore]; }
  std::span<const Index> owners() const noexcept { return owner_; }
  void assign(Index chore, Index agent);

  Bundle bundle(Index agent) const;
  std::vector<Bundle> bundles() const;
  bool holds(Index agent, Index chore) const { return owner_[chore] == agent; }

  friend bool operator==(const Allocation&, const Allocation&) = default;
  friend auto operator<=>(const Allocation&, const Allocation&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<Index> owner_;
};

/// Raises InvalidInput unless `x` has the instance's shape.
void require_compatible(const Instance& inst, const Allocation& x);

/// Dual prices p_j, one per chore; strictly positive whenever produced by
/// the market module.
struct PriceVector {
  std::vector<Rat> prices;

  const Rat& operator[](Index j) const { return prices[j]; }
  std::size_t size() const noexcept { return prices.size(); }
  friend bool operator==(const PriceVector&, const PriceVector&) = default;
};

Rat bundle_price(const PriceVector& p, std::span<const Index> bundle);
/// Bundle price after dropping its most expensive chore; 0 for the empty bundle.
Rat hat_price(const PriceVector& p, std::span<const Index> bundle);

// Witnesses attached to failed (or certified) checks.
struct EnvyPair {
  Index envious;
  Index envied;
  friend bool operator==(const EnvyPair&, const EnvyPair&) = default;
};

/// An exchange cycle: chore chores[t] is held by agents[t] and would move to
/// agents[(t + 1) % k].
struct ExchangeCycle {
  std::vector<Index> agents;
  std::vector<Index> chores;
  Rat product;
};

using Witness = std::variant<EnvyPair, Allocation, ExchangeCycle, std::vector<Rat>>;

struct CheckReport {
  std::string property;
  bool verdict = false;
  std::optional<Witness> witness;

  explicit operator bool() const noexcept { return verdict; }
};

}  // namespace ef1po
