#include "ef1po/checks.hpp"
#include "ef1po/error.hpp"
#include "ef1po/market.hpp"
#include "ef1po/perturb.hpp"

#include "fixtures.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <set>
#include <utility>

namespace ef1po {
namespace {

using testing::bundles;
using testing::costs;
using testing::q;
using testing::rats;

using Edges = std::set<std::pair<Index, Index>>;

// Edges as 1-based (agent, chore) pairs.
Edges edges_of(const TightGraph& g) {
  Edges out;
  for (Index j = 0; j < g.chores(); ++j) {
    for (Index a : g.chore_agents[j]) out.insert({a + 1, j + 1});
  }
  return out;
}

TightGraph graph_at(const Instance& inst, std::vector<Rat> shrunk) {
  return tight_graph(inst, ShrunkWeights{std::move(shrunk), Rat(0)});
}

TEST(Tau, DefaultAndBound) {
  const auto inst = costs({{1, 2}, {2, 1}});
  EXPECT_EQ(default_tau(inst), q("1/16"));
  EXPECT_EQ(tau_bound(inst), q("1/8"));
  EXPECT_EQ(default_tau(costs({{1, 2}})), q("1/8"));
  EXPECT_EQ(default_tau(Instance::empty(2)), q("1/8"));
  EXPECT_THROW(require_admissible_tau(inst, q("1/8")), InvalidInput);
  EXPECT_THROW(require_admissible_tau(inst, Rat(0)), InvalidInput);
  EXPECT_NO_THROW(require_admissible_tau(inst, q("1/9")));
}

TEST(Shrink, SpecExamples) {
  const auto inst = costs({{1, 2}, {2, 1}});
  EXPECT_EQ(shrink(inst, rats({"1", "0"}), q("1/16")).w, rats({"15/16", "1/16"}));
  EXPECT_EQ(shrink(inst, rats({"1/2", "1/2"}), q("1/16")).w, rats({"1/2", "1/2"}));
  EXPECT_THROW(shrink(inst, rats({"1/2", "1/2"}), q("1/8")), InvalidInput);
  EXPECT_THROW(shrink(inst, rats({"1/2", "1/3"}), q("1/16")), InvalidInput);
  EXPECT_THROW(shrink(inst, rats({"3/2", "-1/2"}), q("1/16")), InvalidInput);
}

TEST(Shrink, UnshrinkRoundTrip) {
  std::mt19937_64 rng(8);
  const auto inst = costs({{1, 2, 3}, {2, 1, 3}, {3, 3, 1}});
  for (int t = 0; t < 50; ++t) {
    const auto w = testing::random_simplex_point(rng, 3);
    const auto sw = shrink(inst, w, default_tau(inst));
    Rat total = 0;
    for (const auto& v : sw.w) {
      EXPECT_GE(v, sw.tau);
      total += v;
    }
    EXPECT_EQ(total, 1);
  }
}

TEST(DualPrices, SpecExamples) {
  const auto inst = costs({{1, 2}, {2, 1}});
  EXPECT_EQ(dual_prices(inst, {rats({"1/2", "1/2"}), 0}).prices, rats({"1/2", "1/2"}));
  EXPECT_EQ(dual_prices(inst, {rats({"1/3", "2/3"}), 0}).prices, rats({"1/3", "2/3"}));
  const auto single = costs({{4, 7}});
  EXPECT_EQ(dual_prices(single, {rats({"1"}), 0}).prices, rats({"4", "7"}));
}

TEST(TightGraph, SpecExamples) {
  const auto inst = costs({{1, 2}, {2, 1}});
  const auto even = graph_at(inst, rats({"1/2", "1/2"}));
  EXPECT_EQ(edges_of(even), (Edges{{1, 1}, {2, 2}}));
  EXPECT_TRUE(even.forest);

  const auto skew = graph_at(inst, rats({"1/3", "2/3"}));
  EXPECT_EQ(edges_of(skew), (Edges{{1, 1}, {1, 2}, {2, 2}}));
  EXPECT_TRUE(skew.forest);
  EXPECT_TRUE(skew.has_edge(0, 1));
  EXPECT_FALSE(skew.has_edge(1, 0));

  const auto flat = graph_at(costs({{1, 1}, {1, 1}}), rats({"1/2", "1/2"}));
  EXPECT_EQ(flat.edge_count(), 4u);
  EXPECT_FALSE(flat.forest);
}

TEST(IsOptimal, SpecExamples) {
  const auto g = graph_at(costs({{1, 2}, {2, 1}}), rats({"1/2", "1/2"}));
  EXPECT_TRUE(is_optimal(bundles(2, {{1}, {2}}), g));
  EXPECT_FALSE(is_optimal(bundles(2, {{2}, {1}}), g));
  const auto empty = tight_graph(Instance::empty(2), {rats({"1/2", "1/2"}), 0});
  EXPECT_TRUE(is_optimal(Allocation(2, 0), empty));
}

TEST(Reduce, SpecExamples) {
  const auto inst = costs({{1, 2}, {2, 1}});
  const auto even = reduce(graph_at(inst, rats({"1/2", "1/2"})));
  EXPECT_TRUE(even.hub.empty());
  EXPECT_EQ(even.forced[0], std::optional<Index>(0));
  EXPECT_EQ(even.forced[1], std::optional<Index>(1));

  const auto skew = reduce(graph_at(inst, rats({"1/3", "2/3"})));
  EXPECT_EQ(skew.hub, std::vector<Index>{1});
  EXPECT_EQ(skew.forced[0], std::optional<Index>(0));
  EXPECT_FALSE(skew.forced[1]);
  EXPECT_EQ(skew.neighbors(1), (std::vector<Index>{0, 1}));
  EXPECT_EQ(skew.agent_hub[0], std::vector<Index>{1});
  EXPECT_EQ(skew.agent_hub[1], std::vector<Index>{1});
}

TEST(Reduce, StarHasOneSharedChore) {
  // Chore 1 costs the same for everyone; chores 2..4 are each cheapest for one agent.
  const auto inst = costs({{1, 1, 5, 5}, {1, 5, 1, 5}, {1, 5, 5, 1}});
  const auto h = reduce(graph_at(inst, rats({"1/3", "1/3", "1/3"})));
  EXPECT_EQ(h.hub, std::vector<Index>{0});
  EXPECT_EQ(h.neighbors(0).size(), 3u);
}

TEST(EnumerateOptima, SpecExamples) {
  const auto inst = costs({{1, 2}, {2, 1}});
  EXPECT_EQ(optimal_allocations(graph_at(inst, rats({"1/2", "1/2"}))),
            std::vector<Allocation>{bundles(2, {{1}, {2}})});
  EXPECT_EQ(optimal_allocations(graph_at(inst, rats({"1/3", "2/3"}))),
            (std::vector<Allocation>{bundles(2, {{1, 2}, {}}), bundles(2, {{1}, {2}})}));
}

TEST(EnumerateOptima, RejectsCyclesAndHonoursTheCap) {
  const auto flat = graph_at(costs({{1, 1}, {1, 1}}), rats({"1/2", "1/2"}));
  EXPECT_THROW(optimal_allocations(flat), InvalidInput);
  const auto star = graph_at(costs({{1, 1, 1}, {1, 1, 1}}), rats({"1/2", "1/2"}));
  EXPECT_FALSE(star.forest);
  const auto wide = graph_at(costs({{1, 1, 1}}), rats({"1"}));
  EXPECT_EQ(optimal_allocations(wide).size(), 1u);
}

TEST(EnumerateOptima, VisitorCanStopEarly) {
  const auto g = graph_at(costs({{1, 2}, {2, 1}}), rats({"1/3", "2/3"}));
  int seen = 0;
  EXPECT_EQ(enumerate_optima(g, [&](const Allocation&) { return ++seen < 1; }), 1u);
  EXPECT_THROW(enumerate_optima(g, [](const Allocation&) { return true; }, 1), BudgetExceeded);
}

TEST(WeightedSocialCost, SumsShrunkCosts) {
  const auto inst = costs({{1, 2}, {2, 1}});
  const ShrunkWeights sw{rats({"1/3", "2/3"}), 0};
  EXPECT_EQ(weighted_social_cost(inst, sw, bundles(2, {{1, 2}, {}})), 1);
  EXPECT_EQ(weighted_social_cost(inst, sw, bundles(2, {{1}, {2}})), 1);
  EXPECT_EQ(weighted_social_cost(inst, sw, bundles(2, {{2}, {1}})), 2);
}

// The minimum weighted social cost equals the sum of dual prices, and the
// enumerated optima are exactly the minimizers.
TEST(MarketProperties, StrongDualityAndExactOptima) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 150; ++t) {
    const std::size_t n = 2 + rng() % 2;
    const std::size_t m = 1 + rng() % 4;
    const auto base = testing::random_instance(rng, n, m, 6, t % 3 == 0);
    const auto inst = certify_perturbation(base, rng()).first;
    const auto sw = shrink(inst, testing::random_simplex_point(rng, n), default_tau(inst));
    const auto g = tight_graph(inst, sw);
    ASSERT_TRUE(g.forest);
    Rat price_sum = 0;
    for (const auto& p : g.prices.prices) price_sum += p;

    std::optional<Rat> best;
    std::set<Allocation> minimizers;
    testing::for_each_allocation(n, m, [&](const Allocation& x) {
      const Rat cost = weighted_social_cost(inst, sw, x);
      if (!best || cost < *best) {
        best = cost;
        minimizers.clear();
      }
      if (cost == *best) minimizers.insert(x);
    });
    EXPECT_EQ(*best, price_sum);
    const auto optima = optimal_allocations(g);
    EXPECT_EQ(std::set<Allocation>(optima.begin(), optima.end()), minimizers);
    for (const auto& x : optima) EXPECT_TRUE(check_fpo(inst, x).verdict);
  }
}

TEST(MarketProperties, ForestAndSmallHubOnPerturbedInstances) {
  std::mt19937_64 rng(34);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 1 + rng() % 4;
    const std::size_t m = 1 + rng() % 6;
    const auto inst = certify_perturbation(testing::random_instance(rng, n, m, 4), rng()).first;
    const auto g = tight_graph(inst, shrink(inst, testing::random_simplex_point(rng, n), default_tau(inst)));
    ASSERT_TRUE(g.forest);
    const auto h = reduce(g);
    EXPECT_LE(h.hub.size() + 1, std::max<std::size_t>(n, 1));
    std::size_t forced = 0;
    for (const auto& f : h.forced) forced += f.has_value();
    EXPECT_EQ(forced + h.hub.size(), m);
  }
}

}  // namespace
}  // namespace ef1po
