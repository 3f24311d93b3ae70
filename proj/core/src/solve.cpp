#include "ef1po/solve.hpp"

#include "ef1po/error.hpp"
#include "ef1po/solver.hpp"

namespace ef1po {

std::string_view method_name(Method method) {
  switch (method) {
    case Method::paper: return "paper";
    case Method::bruteforce: return "bruteforce";
    case Method::cells: return "cells";
  }
  return "paper";
}

Method parse_method(std::string_view name) {
  if (name == "paper") return Method::paper;
  if (name == "bruteforce") return Method::bruteforce;
  if (name == "cells") return Method::cells;
  throw InvalidInput("unknown method '" + std::string(name) + "'");
}

bool Certificate::certified() const { return ef1 && po_original.value_or(fpo_perturbed); }

PriceVector certificate_prices(const Instance& reduced_perturbed, std::span<const Rat> weights,
                               const std::optional<Rat>& tau) {
  if (tau) return dual_prices(reduced_perturbed, shrink(reduced_perturbed, weights, *tau));
  if (weights.size() != reduced_perturbed.agents()) throw InvalidInput("weights need one entry per agent");
  return dual_prices(reduced_perturbed, ShrunkWeights{{weights.begin(), weights.end()}, Rat(0)});
}

namespace {

struct Candidate {
  Allocation reduced;
  std::vector<Rat> weights;
  std::optional<Rat> tau;
  PriceVector prices;
};

class Pipeline {
 public:
  Pipeline(const Instance& inst, const SolveOptions& options)
      : inst_(inst), options_(options), reduction_(preprocess_zero_costs(inst)),
        alpha_(inst.entitlements().begin(), inst.entitlements().end()) {
    auto [perturbed, plan] = certify_perturbation(reduction_.reduced, options.seed);
    perturbed_ = std::move(perturbed);
    plan_ = std::move(plan);
    tau_ = options.tau ? *options.tau : default_tau(perturbed_);
    require_admissible_tau(perturbed_, tau_);
  }

  SolveResult run() {
    SolveResult result;
    Certificate& cert = result.certificate;
    cert.method = options_.method;
    cert.perturbation_seed = options_.seed;
    cert.eta = plan_.eta;

    std::optional<Candidate> candidate;
    switch (options_.method) {
      case Method::paper:
        candidate = paper(result);
        if (!candidate) cert.fallback_reason = "weight search found no rational weight vector coloring every agent";
        break;
      case Method::cells:
        candidate = cells();
        if (!candidate) cert.fallback_reason = "no optimal allocation of any cell is weighted EF1";
        break;
      case Method::bruteforce:
        break;
    }
    if (candidate) {
      evaluate(*candidate, result);
      if (cert.certified()) return result;
      cert.fallback_reason = "pipeline output failed certification";
    }
    if (options_.method != Method::bruteforce) {
      cert.fallback = true;
      result.run.reset();
      cert.iterations = 0;
      cert.phi_start = 0;
      cert.trace.clear();
    }
    evaluate(bruteforce(), result);
    return result;
  }

 private:
  std::optional<Candidate> paper(SolveResult& result) {
    auto found = find_weights(perturbed_, tau_, alpha_, options_.search);
    if (!found) return std::nullopt;
    Certificate& cert = result.certificate;
    cert.search_stage = found->stage;
    cert.search_candidates = found->candidates;
    const TightGraph g = tight_graph(perturbed_, found->shrunk);
    const ReducedGraph h = reduce(g);
    const RValues rv = r_values(h, g.prices, alpha_);
    Allocation start = initial_allocation(g, h, rv, alpha_, found->witnesses);
    SolverRun run = find_pef1(g, h, rv, alpha_, std::move(start));
    cert.iterations = run.iterations;
    cert.phi_start = run.phi_start;
    for (std::size_t t = 0; t < run.history.size(); ++t) cert.trace.push_back(format_iteration(t + 1, run.history[t]));
    Candidate out{run.allocation, found->w, tau_, g.prices};
    result.run = std::move(run);
    return out;
  }

  std::optional<Candidate> cells() {
    for (const auto& cell : enumerate_cells(perturbed_, tau_, options_.oracle_budget)) {
      std::optional<Allocation> pick;
      enumerate_optima(cell.graph, [&](const Allocation& y) {
        if (!check_wef1(perturbed_, y)) return true;
        pick = y;
        return false;
      });
      if (pick) return Candidate{*pick, cell.w, tau_, cell.graph.prices};
    }
    return std::nullopt;
  }

  Candidate bruteforce() {
    Allocation x = solve_bruteforce(perturbed_, options_.oracle_budget);
    auto w = find_fpo_weights(perturbed_, x);
    if (!w) throw InvariantViolation("brute-force allocation has no fPO weights");
    const Rat total = sum(*w);
    for (auto& wi : *w) wi /= total;
    PriceVector prices = certificate_prices(perturbed_, *w, std::nullopt);
    return Candidate{std::move(x), std::move(*w), std::nullopt, std::move(prices)};
  }

  void evaluate(const Candidate& c, SolveResult& result) {
    Certificate& cert = result.certificate;
    result.allocation = reduction_.expand(c.reduced);
    cert.weights = c.weights;
    cert.tau = c.tau;
    cert.prices.assign(inst_.chores(), Rat(0));
    for (Index r = 0; r < reduction_.kept.size(); ++r) cert.prices[reduction_.kept[r]] = c.prices[r];
    cert.ef1 = check_wef1(inst_, result.allocation).verdict;
    cert.pef1 = check_wpef1(c.prices, c.reduced, alpha_).verdict;
    cert.fpo_perturbed = check_fpo(perturbed_, c.reduced).verdict;
    cert.po_original.reset();
    if (allocation_count(inst_.agents(), inst_.chores()) <= options_.oracle_budget) {
      cert.po_original = check_po_bruteforce(inst_, result.allocation, options_.oracle_budget).verdict;
    }
  }

  const Instance& inst_;
  const SolveOptions& options_;
  ZeroCostReduction reduction_;
  std::vector<Rat> alpha_;
  Instance perturbed_;
  PerturbPlan plan_;
  Rat tau_;
};

}  // namespace

SolveResult solve(const Instance& inst, const SolveOptions& options) { return Pipeline(inst, options).run(); }

}  // namespace ef1po
