#include "ef1po/perturb.hpp"

#include "ef1po/error.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <string>

namespace ef1po {

std::vector<std::uint64_t> nth_primes(std::size_t k) {
  if (k == 0) return {};
  // Rosser's bound p_k < k (ln k + ln ln k) for k >= 6.
  const double kd = static_cast<double>(k);
  std::size_t limit = k < 6 ? 16 : static_cast<std::size_t>(kd * (std::log(kd) + std::log(std::log(kd)))) + 16;
  while (true) {
    std::vector<bool> composite(limit + 1, false);
    std::vector<std::uint64_t> primes;
    for (std::size_t v = 2; v <= limit && primes.size() < k; ++v) {
      if (composite[v]) continue;
      primes.push_back(v);
      for (std::size_t mult = v * v; mult <= limit; mult += v) composite[mult] = true;
    }
    if (primes.size() == k) return primes;
    limit *= 2;
  }
}

Rat pi_cycle(const Instance& inst, const BipartiteCycle& cycle) {
  const std::size_t len = cycle.agents.size();
  if (len < 2 || cycle.chores.size() != len) throw InvalidInput("a cycle needs at least two agent/chore pairs");
  std::set<Index> agents(cycle.agents.begin(), cycle.agents.end());
  std::set<Index> chores(cycle.chores.begin(), cycle.chores.end());
  if (agents.size() != len || chores.size() != len) throw InvalidInput("cycle repeats an agent or chore");
  if (*agents.rbegin() >= inst.agents() || *chores.rbegin() >= inst.chores()) {
    throw InvalidInput("cycle index out of range");
  }
  Rat product = 1;
  for (std::size_t t = 0; t < len; ++t) {
    const Index j = cycle.chores[t];
    product *= inst.cost(cycle.agents[t], j) / inst.cost(cycle.agents[(t + 1) % len], j);
  }
  return product;
}

namespace {

using CycleVisitor = std::function<bool(const BipartiteCycle&, const Rat&, const Rat&)>;

class CycleWalker {
 public:
  CycleWalker(const Instance& inst, std::uint64_t budget, const CycleVisitor& visit)
      : inst_(inst), budget_(budget), visit_(visit),
        agent_used_(inst.agents(), false), chore_used_(inst.chores(), false) {}

  void run() {
    for (Index s = 0; s < inst_.agents() && !stop_; ++s) {
      start_ = s;
      cycle_.agents = {s};
      agent_used_[s] = true;
      walk(s, Rat(1), Rat(1));
      agent_used_[s] = false;
    }
  }

 private:
  void walk(Index at, const Rat& forward, const Rat& backward) {
    for (Index j = 0; j < inst_.chores() && !stop_; ++j) {
      if (chore_used_[j]) continue;
      chore_used_[j] = true;
      cycle_.chores.push_back(j);
      const Rat next_forward = forward * inst_.cost(at, j);
      if (cycle_.agents.size() >= 2) {
        if (++visited_ > budget_) {
          throw BudgetExceeded("cycle enumeration exceeded " + std::to_string(budget_) + " cycles");
        }
        if (!visit_(cycle_, next_forward, backward * inst_.cost(start_, j))) stop_ = true;
      }
      for (Index b = start_ + 1; b < inst_.agents() && !stop_; ++b) {
        if (agent_used_[b]) continue;
        agent_used_[b] = true;
        cycle_.agents.push_back(b);
        walk(b, next_forward, backward * inst_.cost(b, j));
        cycle_.agents.pop_back();
        agent_used_[b] = false;
      }
      cycle_.chores.pop_back();
      chore_used_[j] = false;
    }
  }

  const Instance& inst_;
  std::uint64_t budget_;
  const CycleVisitor& visit_;
  std::vector<bool> agent_used_;
  std::vector<bool> chore_used_;
  BipartiteCycle cycle_;
  Index start_ = 0;
  std::uint64_t visited_ = 0;
  bool stop_ = false;
};

std::vector<Rat> subset_sums(const Instance& inst, Index agent) {
  if (inst.chores() > kMaxSubsetChores) {
    throw BudgetExceeded("subset-sum enumeration limited to " + std::to_string(kMaxSubsetChores) + " chores");
  }
  std::vector<Rat> sums{Rat(0)};
  sums.reserve(std::size_t{1} << inst.chores());
  for (Index j = 0; j < inst.chores(); ++j) {
    const std::size_t half = sums.size();
    for (std::size_t s = 0; s < half; ++s) sums.push_back(sums[s] + inst.cost(agent, j));
  }
  std::sort(sums.begin(), sums.end());
  sums.erase(std::unique(sums.begin(), sums.end()), sums.end());
  return sums;
}

void keep_min(std::optional<Rat>& best, const Rat& candidate) {
  if (!best || candidate < *best) best = candidate;
}

Rat power(const Rat& base, std::size_t exponent) {
  Rat out = 1;
  for (std::size_t e = 0; e < exponent; ++e) out *= base;
  return out;
}

}  // namespace

void for_each_cycle(const Instance& inst, std::uint64_t budget, const CycleVisitor& visit) {
  inst.require_positive();
  CycleWalker(inst, budget, visit).run();
}

DegeneracyReport is_nondegenerate(const Instance& inst, std::uint64_t budget) {
  DegeneracyReport report;
  for_each_cycle(inst, budget, [&](const BipartiteCycle& cycle, const Rat& forward, const Rat& backward) {
    if (forward != backward) return true;
    report.verdict = false;
    report.cycle = cycle;
    return false;
  });
  return report;
}

std::optional<Rat> min_subset_gap(const Instance& inst) {
  std::optional<Rat> best;
  for (Index i = 0; i < inst.agents(); ++i) {
    const auto sums = subset_sums(inst, i);
    for (std::size_t s = 1; s < sums.size(); ++s) keep_min(best, sums[s] - sums[s - 1]);
  }
  return best;
}

std::optional<Rat> min_cycle_gap(const Instance& inst, std::uint64_t budget) {
  std::optional<Rat> best;
  for_each_cycle(inst, budget, [&](const BipartiteCycle&, const Rat& forward, const Rat& backward) {
    if (forward != backward) keep_min(best, abs(forward - backward));
    return true;
  });
  return best;
}

std::optional<Rat> min_weighted_gap(const Instance& inst) {
  std::optional<Rat> best;
  const std::size_t n = inst.agents();
  for (Index i = 0; i < n; ++i) {
    const auto sums = subset_sums(inst, i);
    for (Index k = 0; k < n; ++k) {
      if (k == i) continue;
      std::vector<Rat> theirs;
      theirs.reserve(sums.size());
      for (const auto& s : sums) theirs.push_back(s / inst.entitlement(k));
      for (const auto& s : sums) {
        const Rat mine = s / inst.entitlement(i);
        auto above = std::upper_bound(theirs.begin(), theirs.end(), mine);
        if (above != theirs.end()) keep_min(best, *above - mine);
        auto below = std::lower_bound(theirs.begin(), theirs.end(), mine);
        if (below != theirs.begin()) keep_min(best, mine - *std::prev(below));
      }
    }
  }
  return best;
}

Thresholds thresholds(const Instance& inst, std::uint64_t cycle_budget) {
  inst.require_positive();
  const std::size_t n = inst.agents();
  const std::size_t m = inst.chores();
  Thresholds t;
  const auto primes = nth_primes(n * m);
  t.primes.assign(n, std::vector<std::uint64_t>(m));
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < m; ++j) t.primes[i][j] = primes[m * i + j];
  }
  t.delta = min_subset_gap(inst);
  t.delta_prime = min_cycle_gap(inst, cycle_budget);
  t.delta_weighted = min_weighted_gap(inst);

  const Rat q = primes.empty() ? Rat(2) : Rat(primes.back());
  const Rat cmax = inst.max_cost();
  const Rat nn(n);
  const Rat mm(m);
  t.eps_nondegen.base = nn * q;
  t.eps_ef1.base = q;
  t.eps_po.base = q;
  t.eps_wef1.base = q;
  if (t.delta_prime) t.eps_nondegen.ratio = 1 + *t.delta_prime / (2 * nn * cmax);
  if (t.delta) {
    t.eps_ef1.ratio = 1 + *t.delta / (2 * mm * cmax);
    t.eps_po.ratio = 1 + power(*t.delta, n) / (2 * mm * power(q, n - 1) * power(cmax, n));
    t.eps_wef1.ratio = 1 + *t.delta * inst.min_entitlement() / (2 * mm * cmax);
  }
  return t;
}

Rat margin_eta(const Instance& inst) {
  inst.require_positive();
  const std::size_t n = inst.agents();
  const std::size_t m = inst.chores();
  if (m == 0) return Rat(1);
  const Rat delta = *min_subset_gap(inst);
  const Rat cmax = inst.max_cost();
  const Rat two_m_cmax = 2 * Rat(m) * cmax;
  // PO branch with the perturbed-cost factor bounded by 2.
  Rat eta = power(delta, n) / (2 * Rat(m) * power(cmax, n) * power(Rat(2), n - 1));
  if (n >= 2) {
    eta = std::min(eta, delta / two_m_cmax);
    eta = std::min(eta, *min_weighted_gap(inst) * inst.min_entitlement() / two_m_cmax);
  }
  return eta;
}

Instance apply_plan(const Instance& inst, const PerturbPlan& plan) {
  if (inst.chores() == 0) return inst;
  if (plan.factors.size() != inst.agents()) throw InvalidInput("perturbation plan has the wrong shape");
  CostMatrix costs = inst.costs();
  for (Index i = 0; i < inst.agents(); ++i) {
    if (plan.factors[i].size() != inst.chores()) throw InvalidInput("perturbation plan has the wrong shape");
    for (Index j = 0; j < inst.chores(); ++j) costs[i][j] *= plan.factors[i][j];
  }
  return Instance(std::move(costs), std::vector<Rat>(inst.entitlements().begin(), inst.entitlements().end()));
}

std::pair<Instance, PerturbPlan> certify_perturbation(const Instance& inst, std::uint64_t seed,
                                                      std::uint64_t cycle_budget) {
  inst.require_positive();
  PerturbPlan plan;
  plan.seed = seed;
  const std::size_t n = inst.agents();
  const std::size_t m = inst.chores();
  if (m == 0) {
    plan.eta = 1;
    plan.factors.assign(n, {});
    plan.certified = true;
    return {inst, plan};
  }
  plan.eta = margin_eta(inst);
  const Rat scale = plan.eta / Rat(BigInt(1) << 63);
  std::mt19937_64 rng(seed);
  std::optional<BipartiteCycle> last_witness;
  for (int attempt = 1; attempt <= kPerturbationAttempts; ++attempt) {
    std::set<std::uint64_t> used;
    plan.factors.assign(n, std::vector<Rat>(m));
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < m; ++j) {
        std::uint64_t k = 0;
        while (k == 0 || used.contains(k)) k = rng() >> 1;
        used.insert(k);
        plan.factors[i][j] = 1 + Rat(k) * scale;
      }
    }
    plan.attempts = attempt;
    Instance perturbed = apply_plan(inst, plan);
    auto report = is_nondegenerate(perturbed, cycle_budget);
    if (report) {
      plan.certified = true;
      return {std::move(perturbed), std::move(plan)};
    }
    last_witness = report.cycle;
  }
  std::string where;
  if (last_witness) {
    for (std::size_t t = 0; t < last_witness->agents.size(); ++t) {
      where += " a" + std::to_string(last_witness->agents[t] + 1) + " c" + std::to_string(last_witness->chores[t] + 1);
    }
  }
  throw BudgetExceeded("no non-degenerate perturbation after " + std::to_string(kPerturbationAttempts) +
                       " attempts (seed " + std::to_string(seed) + ", last cycle:" + where + ")");
}

}  // namespace ef1po
