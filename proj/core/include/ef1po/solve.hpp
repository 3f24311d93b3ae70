#pragma once

#include "ef1po/checks.hpp"
#include "ef1po/perturb.hpp"
#include "ef1po/search.hpp"
#include "ef1po/solver.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ef1po {

enum class Method { paper, bruteforce, cells };

std::string_view method_name(Method method);
/// Throws InvalidInput for an unknown name.
Method parse_method(std::string_view name);

struct SolveOptions {
  Method method = Method::paper;
  /// Shrinking parameter; default_tau of the perturbed instance when unset.
  std::optional<Rat> tau;
  std::uint64_t seed = 0;
  /// Ceiling on n^m for the PO oracle and the brute-force solver.
  std::uint64_t oracle_budget = kDefaultOracleBudget;
  SearchBudget search;
};

/// Evidence attached to a solve. Prices and weights refer to the perturbed
/// instance after zero-cost chores are removed; prices are reported per
/// original chore, with zero for removed chores.
struct Certificate {
  Method method = Method::paper;
  bool fallback = false;
  std::string fallback_reason;
  std::string search_stage;
  std::uint64_t search_candidates = 0;

  /// Simplex weights (with `tau`) for the weight-based methods. For
  /// brute-force results these are fPO weights used without shrinking and
  /// `tau` is absent.
  std::vector<Rat> weights;
  std::optional<Rat> tau;
  std::vector<Rat> prices;
  std::uint64_t perturbation_seed = 0;
  Rat eta;

  bool ef1 = false;
  bool pef1 = false;
  bool fpo_perturbed = false;
  std::optional<bool> po_original;  // absent when n^m exceeds the oracle budget

  std::size_t iterations = 0;
  std::uint64_t phi_start = 0;
  std::vector<std::string> trace;

  /// ef1 and (po_original, or fpo_perturbed when the oracle did not run).
  bool certified() const;
};

struct SolveResult {
  Allocation allocation;
  Certificate certificate;
  /// The run of the transfer algorithm when the paper method produced the
  /// allocation.
  std::optional<SolverRun> run;
};

/// Zero-cost preprocessing, certified perturbation, weight search, the
/// transfer algorithm, and certification against the original instance,
/// with brute force on the perturbed instance as fallback. Entitlements come
/// from the instance.
SolveResult solve(const Instance& inst, const SolveOptions& options = {});

/// Recomputes the prices a certificate refers to, over the chores of the
/// zero-cost-reduced instance.
PriceVector certificate_prices(const Instance& reduced_perturbed, std::span<const Rat> weights,
                               const std::optional<Rat>& tau);

}  // namespace ef1po
