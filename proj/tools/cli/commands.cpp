#include "commands.hpp"

#include "json_io.hpp"

#include "ef1po/error.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

namespace ef1po::cli {
namespace {

Json error_json(const char* kind, const std::string& message) {
  return Json{{"error", Json{{"kind", kind}, {"message", message}}}};
}

template <typename Body>
int guarded(std::ostream& out, std::ostream& err, Body body) {
  try {
    return body();
  } catch (const InvalidInput& e) {
    out << error_json("input", e.what()).dump() << '\n';
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const BudgetExceeded& e) {
    out << error_json("budget", e.what()).dump() << '\n';
    err << "error: " << e.what() << '\n';
    return kBudget;
  } catch (const InvariantViolation& e) {
    out << error_json("invariant", e.what()).dump() << '\n';
    err << "error: " << e.what() << '\n';
    return kCertificationFailure;
  }
}

std::vector<Rat> entitlement_vector(const Instance& inst) {
  return {inst.entitlements().begin(), inst.entitlements().end()};
}

const char* verdict_text(std::optional<bool> v) {
  if (!v) return "NA";
  return *v ? "true" : "false";
}

}  // namespace

Instance generate_instance(std::size_t agents, std::size_t chores, std::int64_t max_cost, std::uint64_t seed,
                           bool entitlements) {
  if (agents < 1) throw InvalidInput("--agents must be at least 1");
  if (max_cost < 1) throw InvalidInput("--max-cost must be at least 1");
  std::mt19937_64 rng(seed);
  const auto range = static_cast<std::uint64_t>(max_cost);
  CostMatrix costs(agents, std::vector<Rat>(chores));
  for (auto& row : costs) {
    for (auto& c : row) c = Rat(1 + rng() % range);
  }
  std::vector<Rat> alpha;
  if (entitlements) {
    for (std::size_t i = 0; i < agents; ++i) alpha.push_back(Rat(1 + rng() % 3));
  }
  if (chores == 0) return Instance::empty(agents, std::move(alpha));
  return Instance(std::move(costs), std::move(alpha));
}

std::pair<std::int64_t, std::int64_t> parse_range(const std::string& text) {
  auto number = [&](const std::string& part) {
    std::size_t used = 0;
    std::int64_t value = 0;
    try {
      value = std::stoll(part, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (part.empty() || used != part.size()) throw InvalidInput("bad range '" + text + "'");
    return value;
  };
  const auto dots = text.find("..");
  if (dots == std::string::npos) {
    const auto v = number(text);
    return {v, v};
  }
  const auto lo = number(text.substr(0, dots));
  const auto hi = number(text.substr(dots + 2));
  if (lo > hi) throw InvalidInput("empty range '" + text + "'");
  return {lo, hi};
}

int cmd_gen(const GenArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(out, err, [&] {
    if (args.chores < 0) throw InvalidInput("--chores must be non-negative");
    if (args.agents < 1) throw InvalidInput("--agents must be at least 1");
    const Instance inst = generate_instance(static_cast<std::size_t>(args.agents),
                                            static_cast<std::size_t>(args.chores), args.max_cost, args.seed,
                                            args.entitlements);
    out << instance_to_json(inst).dump() << '\n';
    return static_cast<int>(kCertified);
  });
}

int cmd_solve(const SolveArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(out, err, [&] {
    const Instance inst = parse_instance(read_json_file(args.file), args.allow_zero);
    SolveOptions options;
    options.method = parse_method(args.method);
    if (args.tau) options.tau = parse_rat(*args.tau);
    options.seed = args.seed;
    options.oracle_budget = args.budget;
    const SolveResult result = solve(inst, options);
    if (args.trace) {
      for (const auto& line : result.certificate.trace) err << line << '\n';
    }
    out << result_to_json(result).dump(2) << '\n';
    return static_cast<int>(result.certificate.certified() ? kCertified : kCertificationFailure);
  });
}

int cmd_check(const CheckArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(out, err, [&] {
    const Instance inst = parse_instance(read_json_file(args.file), args.allow_zero);
    const Json alloc_doc = read_json_file(args.allocation);
    const Allocation x = parse_bundles(alloc_doc, inst.agents(), inst.chores());
    const auto alpha = entitlement_vector(inst);
    bool all = true;
    for (const auto& property : args.properties) {
      CheckReport report;
      if (property == "ef1") {
        report = check_ef1(inst, x);
      } else if (property == "wef1") {
        report = check_wef1(inst, x);
      } else if (property == "po") {
        report = check_po_bruteforce(inst, x, args.budget);
        report.property = "po";
      } else if (property == "fpo") {
        if (!inst.all_costs_positive()) throw InvalidInput("fpo needs strictly positive costs");
        report = check_fpo(inst, x);
      } else if (property == "pef1") {
        const Json* cert = alloc_doc.contains("certificate") ? &alloc_doc["certificate"] : nullptr;
        if (!cert || !cert->contains("weights") || !(*cert)["weights"].is_array() ||
            !cert->contains("perturbation_seed")) {
          throw InvalidInput("pef1 needs a certificate with weights and perturbation_seed");
        }
        std::vector<Rat> weights;
        for (const auto& w : (*cert)["weights"]) weights.push_back(rat_from_json(w));
        std::optional<Rat> tau;
        if (cert->contains("tau") && !(*cert)["tau"].is_null()) tau = rat_from_json((*cert)["tau"]);
        const auto reduction = preprocess_zero_costs(inst);
        const auto perturbed =
            certify_perturbation(reduction.reduced, (*cert)["perturbation_seed"].get<std::uint64_t>()).first;
        const PriceVector prices = certificate_prices(perturbed, weights, tau);
        report = check_wpef1(prices, reduction.restrict(x), alpha);
        report.property = "pef1";
      } else {
        throw InvalidInput("unknown property '" + property + "' (expected ef1, wef1, pef1, po, fpo)");
      }
      all = all && report.verdict;
      out << report_to_json(report).dump() << '\n';
    }
    return static_cast<int>(all ? kCertified : kCertificationFailure);
  });
}

int cmd_perturb(const PerturbArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(out, err, [&] {
    const Instance raw = parse_instance(read_json_file(args.file), args.allow_zero);
    const Instance inst = preprocess_zero_costs(raw).reduced;
    if (!args.info) {
      out << instance_to_json(certify_perturbation(inst, args.seed).first).dump(2) << '\n';
      return static_cast<int>(kCertified);
    }
    const Thresholds t = thresholds(inst);
    auto optional_rat = [](const std::optional<Rat>& v, const char* absent) {
      return v ? rat_to_json(*v) : Json(absent);
    };
    auto bound = [](const EpsBound& b) {
      return Json{{"base", rat_to_json(b.base)}, {"ratio", b.ratio ? rat_to_json(*b.ratio) : Json(nullptr)}};
    };
    Json doc;
    doc["delta"] = optional_rat(t.delta, "no two distinct subset costs");
    doc["delta_prime"] = optional_rat(t.delta_prime, "no cycle with pi != 1");
    doc["delta_weighted"] = optional_rat(t.delta_weighted, "no pair of agents");
    doc["eps_nondegen"] = bound(t.eps_nondegen);
    doc["eps_ef1"] = bound(t.eps_ef1);
    doc["eps_po"] = bound(t.eps_po);
    doc["eps_wef1"] = bound(t.eps_wef1);
    doc["eta"] = rat_to_json(margin_eta(inst));
    doc["primes"] = t.primes;
    out << doc.dump(2) << '\n';
    return static_cast<int>(kCertified);
  });
}

int cmd_bench(const BenchArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(out, err, [&] {
    if (args.trials < 0) throw InvalidInput("--trials must be non-negative");
    const auto [a_lo, a_hi] = parse_range(args.agents);
    const auto [c_lo, c_hi] = parse_range(args.chores);
    if (a_lo < 1 || c_lo < 0) throw InvalidInput("agent ranges start at 1 and chore ranges at 0");
    const Method method = parse_method(args.method);

    struct Trial {
      std::size_t n, m;
      std::uint64_t seed;
      std::string row;
      bool fallback = false;
      bool certified = false;
    };
    std::vector<Trial> trials;
    std::mt19937_64 rng(args.seed);
    for (std::int64_t t = 0; t < args.trials; ++t) {
      Trial trial;
      trial.n = static_cast<std::size_t>(a_lo + static_cast<std::int64_t>(rng() % (a_hi - a_lo + 1)));
      trial.m = static_cast<std::size_t>(c_lo + static_cast<std::int64_t>(rng() % (c_hi - c_lo + 1)));
      trial.seed = rng();
      trials.push_back(std::move(trial));
    }

    std::mutex err_mutex;
    auto run_trial = [&](std::size_t t) {
      Trial& trial = trials[t];
      std::ostringstream row;
      row << t << ',' << trial.n << ',' << trial.m << ',' << trial.seed << ',';
      try {
        const Instance inst = generate_instance(trial.n, trial.m, args.max_cost, trial.seed, args.entitlements);
        SolveOptions options;
        options.method = method;
        options.seed = trial.seed;
        options.oracle_budget = args.budget;
        const SolveResult result = solve(inst, options);
        const Certificate& c = result.certificate;
        trial.fallback = c.fallback;
        trial.certified = c.certified();
        row << (c.fallback ? "bruteforce" : method_name(c.method)) << ',' << c.iterations << ',' << c.phi_start
            << ',' << verdict_text(c.ef1) << ',' << verdict_text(c.pef1) << ',' << verdict_text(c.fpo_perturbed)
            << ',' << verdict_text(c.po_original) << ',' << verdict_text(c.fallback);
      } catch (const std::exception& e) {
        const std::lock_guard<std::mutex> lock(err_mutex);
        err << "trial " << t << ": " << e.what() << '\n';
        row << "error,0,0,false,false,false,false,false";
      }
      trial.row = row.str();
    };

    const unsigned jobs = std::max(1u, args.jobs);
    if (jobs == 1) {
      for (std::size_t t = 0; t < trials.size(); ++t) run_trial(t);
    } else {
      std::atomic<std::size_t> next{0};
      std::vector<std::thread> pool;
      for (unsigned k = 0; k < jobs; ++k) {
        pool.emplace_back([&] {
          for (std::size_t t = next++; t < trials.size(); t = next++) run_trial(t);
        });
      }
      for (auto& th : pool) th.join();
    }

    out << "trial,n,m,seed,method,iterations,phi_start,ef1,pef1,fpo_perturbed,po_original,fallback\n";
    std::size_t fallbacks = 0;
    bool all = true;
    for (const auto& trial : trials) {
      out << trial.row << '\n';
      fallbacks += trial.fallback ? 1 : 0;
      all = all && trial.certified;
    }
    err << "fallback_rate " << fallbacks << '/' << trials.size() << '\n';
    return static_cast<int>(all ? kCertified : kCertificationFailure);
  });
}

}  // namespace ef1po::cli
