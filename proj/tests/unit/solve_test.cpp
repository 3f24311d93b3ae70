#include "ef1po/error.hpp"
#include "ef1po/solve.hpp"

#include "fixtures.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

namespace ef1po {
namespace {

using testing::bundles;
using testing::costs;
using testing::q;

// Price-EF1 is only promised for allocations from the transfer algorithm.
void expect_all_checks(const Certificate& cert) {
  EXPECT_TRUE(cert.ef1);
  if (cert.method == Method::paper && !cert.fallback) EXPECT_TRUE(cert.pef1);
  EXPECT_TRUE(cert.fpo_perturbed);
  ASSERT_TRUE(cert.po_original);
  EXPECT_TRUE(*cert.po_original);
  EXPECT_TRUE(cert.certified());
}

TEST(MethodNames, RoundTrip) {
  for (Method m : {Method::paper, Method::bruteforce, Method::cells}) EXPECT_EQ(parse_method(method_name(m)), m);
  EXPECT_THROW(parse_method("simplex"), InvalidInput);
}

TEST(Certificate, CertifiedPrefersTheOracle) {
  Certificate cert;
  cert.ef1 = true;
  cert.fpo_perturbed = true;
  EXPECT_TRUE(cert.certified());
  cert.po_original = false;
  EXPECT_FALSE(cert.certified());
  cert.po_original = true;
  cert.fpo_perturbed = false;
  EXPECT_TRUE(cert.certified());
  cert.ef1 = false;
  EXPECT_FALSE(cert.certified());
}

TEST(Solve, SpecExamples) {
  const auto swap = solve(costs({{1, 2}, {2, 1}}));
  EXPECT_EQ(swap.allocation, bundles(2, {{1}, {2}}));
  EXPECT_FALSE(swap.certificate.fallback);
  expect_all_checks(swap.certificate);

  const auto flat = solve(costs({{1, 1}, {1, 1}}));
  EXPECT_EQ(flat.allocation.bundle(0).size(), 1u);
  EXPECT_EQ(flat.allocation.bundle(1).size(), 1u);
  expect_all_checks(flat.certificate);

  const auto single = solve(costs({{3, 1, 4, 1, 5}}));
  EXPECT_EQ(single.allocation, Allocation(1, 5, 0));
  expect_all_checks(single.certificate);
}

TEST(Solve, EmptyInstance) {
  const auto result = solve(Instance::empty(3));
  EXPECT_EQ(result.allocation, Allocation(3, 0));
  expect_all_checks(result.certificate);
}

TEST(Solve, ZeroCostChoresGoToTheirZeroAgent) {
  const auto raw = costs({{0, 1}, {1, 1}});
  const auto result = solve(raw);
  EXPECT_EQ(result.allocation.owner(0), 0u);
  EXPECT_EQ(result.certificate.prices[0], 0);
  EXPECT_TRUE(result.certificate.certified());
  EXPECT_TRUE(testing::oracle_wef1(raw, result.allocation));
  EXPECT_TRUE(testing::oracle_po(raw, result.allocation));
}

TEST(Solve, EveryMethodCertifies) {
  const auto inst = costs({{4, 2, 7, 1}, {3, 3, 2, 6}, {5, 1, 4, 4}});
  for (Method m : {Method::paper, Method::bruteforce, Method::cells}) {
    SolveOptions opts;
    opts.method = m;
    const auto result = solve(inst, opts);
    EXPECT_EQ(result.certificate.method, m);
    expect_all_checks(result.certificate);
    EXPECT_EQ(result.run.has_value(), m == Method::paper && !result.certificate.fallback);
  }
}

TEST(Solve, BruteforceCertificateHasNoTau) {
  SolveOptions opts;
  opts.method = Method::bruteforce;
  const auto result = solve(costs({{1, 2}, {2, 1}}), opts);
  EXPECT_FALSE(result.certificate.tau);
  EXPECT_FALSE(result.certificate.fallback);
  ASSERT_EQ(result.certificate.weights.size(), 2u);
  EXPECT_EQ(sum(result.certificate.weights), 1);
}

TEST(Solve, RejectsInadmissibleTau) {
  SolveOptions opts;
  opts.tau = q("1/2");
  EXPECT_THROW(solve(costs({{1, 2}, {2, 1}}), opts), InvalidInput);
}

TEST(Solve, CertificatePricesAreReproducible) {
  std::mt19937_64 rng(91);
  for (int t = 0; t < 20; ++t) {
    auto raw = testing::random_instance(rng, 2 + rng() % 2, 1 + rng() % 5, 6, t % 2 == 1);
    CostMatrix c = raw.costs();
    c[0][0] = 0;
    const Instance inst(c, {raw.entitlements().begin(), raw.entitlements().end()});
    SolveOptions opts;
    opts.seed = rng();
    opts.method = t % 3 == 0 ? Method::bruteforce : Method::paper;
    const auto result = solve(inst, opts);
    const auto reduction = preprocess_zero_costs(inst);
    const auto perturbed = certify_perturbation(reduction.reduced, opts.seed).first;
    const auto prices = certificate_prices(perturbed, result.certificate.weights, result.certificate.tau);
    for (Index r = 0; r < reduction.kept.size(); ++r) {
      EXPECT_EQ(prices[r], result.certificate.prices[reduction.kept[r]]);
    }
    for (const auto& [chore, agent] : reduction.forced) {
      EXPECT_EQ(result.allocation.owner(chore), agent);
      EXPECT_EQ(result.certificate.prices[chore], 0);
    }
  }
}

TEST(Solve, DeterministicForAFixedSeed) {
  std::mt19937_64 rng(92);
  const auto inst = testing::random_instance(rng, 3, 6, 10, true);
  SolveOptions opts;
  opts.seed = 5;
  const auto a = solve(inst, opts);
  const auto b = solve(inst, opts);
  EXPECT_EQ(a.allocation, b.allocation);
  EXPECT_EQ(a.certificate.weights, b.certificate.weights);
  EXPECT_EQ(a.certificate.trace, b.certificate.trace);
}

TEST(SolveProperties, OutputsAreCertifiedAgainstTheOracles) {
  std::mt19937_64 rng(93);
  for (int t = 0; t < 60; ++t) {
    const auto inst = testing::random_instance(rng, 2 + rng() % 3, 1 + rng() % 6, 10, t % 2 == 1);
    SolveOptions opts;
    opts.seed = rng();
    const auto result = solve(inst, opts);
    EXPECT_TRUE(result.certificate.certified()) << "trial " << t;
    EXPECT_TRUE(testing::oracle_wef1(inst, result.allocation));
    EXPECT_TRUE(testing::oracle_po(inst, result.allocation));
    if (result.run) EXPECT_LE(result.run->iterations, iteration_bound(inst.agents()));
  }
}

// The unweighted pipeline is the weighted one at unit entitlements.
TEST(SolveProperties, UnitEntitlementsMatchTheUnweightedRun) {
  std::mt19937_64 rng(94);
  for (int t = 0; t < 30; ++t) {
    const auto inst = testing::random_instance(rng, 2 + rng() % 3, 1 + rng() % 6);
    const auto explicit_units = inst.with_entitlements(std::vector<Rat>(inst.agents(), Rat(1)));
    SolveOptions opts;
    opts.seed = t;
    EXPECT_EQ(solve(inst, opts).allocation, solve(explicit_units, opts).allocation);
  }
}

}  // namespace
}  // namespace ef1po
