#include <limits>
#include <random>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "champion/lot_sizing.hpp"
#include "fixtures.hpp"

namespace champion {
namespace {

const CostRates kRates{64.0, 1.0, 9.0};

LotSizingInstance make(std::vector<std::int64_t> d, std::int64_t x0 = 0, CostRates r = kRates) {
  return LotSizingInstance{std::move(d), x0, r};
}

// Two-period oracle: the terminal constraint fixes u2 = total - x0 - u1, so
// scanning u1 enumerates every feasible plan.
double two_period_enumeration(const LotSizingInstance& inst, std::int64_t* best_u1 = nullptr, bool forced = false) {
  const std::int64_t need = inst.total_demand() - inst.initial_inventory;
  double best = std::numeric_limits<double>::infinity();
  for (std::int64_t u1 = forced ? 1 : 0; u1 <= need; ++u1) {
    const std::int64_t u2 = need - u1;
    const std::int64_t x1 = inst.initial_inventory - inst.demands[0] + u1;
    const std::int64_t x2 = x1 - inst.demands[1] + u2;
    const double c = maintenance_cost(x1, inst.rates) + maintenance_cost(x2, inst.rates) +
                     (u1 > 0 ? inst.rates.setup : 0.0) + (u2 > 0 ? inst.rates.setup : 0.0);
    if (c < best) {
      best = c;
      if (best_u1) *best_u1 = u1;
    }
  }
  return best;
}

void expect_valid_plan(const LotSizingInstance& inst, const LotSizingPlan& plan) {
  ASSERT_EQ(plan.orders.size(), inst.periods());
  ASSERT_EQ(plan.inventories.size(), inst.periods());
  std::int64_t x = inst.initial_inventory;
  double cost = 0.0;
  for (std::size_t i = 0; i < inst.periods(); ++i) {
    EXPECT_GE(plan.orders[i], 0);
    x = x - inst.demands[i] + plan.orders[i];
    EXPECT_EQ(plan.inventories[i], x);
    cost += inst.rates.holding * std::max<std::int64_t>(x, 0) + inst.rates.penalty * std::max<std::int64_t>(-x, 0) +
            (plan.orders[i] > 0 ? inst.rates.setup : 0.0);
  }
  EXPECT_NEAR(plan.total_cost, cost, 1e-9);
  if (inst.terminal_feasible()) {
    EXPECT_TRUE(plan.feasible);
    EXPECT_EQ(plan.inventories.back(), 0);
  }
}

TEST(Solve, NothingToServe) {
  const auto plan = solve(make({0, 0}));
  EXPECT_EQ(plan.orders, (std::vector<std::int64_t>{0, 0}));
  EXPECT_DOUBLE_EQ(plan.total_cost, 0.0);
}

TEST(Solve, SinglePeriod) {
  const auto plan = solve(make({10}));
  EXPECT_EQ(plan.orders, (std::vector<std::int64_t>{10}));
  EXPECT_DOUBLE_EQ(plan.total_cost, 64.0);
}

TEST(Solve, OrderOnceAndHold) {
  const auto inst = make({10, 10});
  std::int64_t u1 = -1;
  const double oracle = two_period_enumeration(inst, &u1);
  EXPECT_DOUBLE_EQ(oracle, 74.0);
  EXPECT_EQ(u1, 20);
  const auto plan = solve(inst);
  EXPECT_EQ(plan.orders, (std::vector<std::int64_t>{20, 0}));
  EXPECT_DOUBLE_EQ(plan.total_cost, oracle);
}

TEST(Solve, BacklogBeatsEarlyOrdering) {
  const auto inst = make({1, 100});
  const double oracle = two_period_enumeration(inst);
  EXPECT_DOUBLE_EQ(oracle, 73.0);
  const auto plan = solve(inst);
  EXPECT_EQ(plan.orders, (std::vector<std::int64_t>{0, 101}));
  EXPECT_EQ(plan.inventories, (std::vector<std::int64_t>{-1, 0}));
  EXPECT_DOUBLE_EQ(plan.total_cost, 73.0);
}

TEST(Solve, InitialStockAndBacklog) {
  // stock covers period 1 and part of period 2
  auto plan = solve(make({5, 10, 10}, 8));
  expect_valid_plan(make({5, 10, 10}, 8), plan);
  EXPECT_DOUBLE_EQ(plan.total_cost, solve_bruteforce(make({5, 10, 10}, 8)).total_cost);
  // incoming backlog
  plan = solve(make({5, 10}, -7));
  expect_valid_plan(make({5, 10}, -7), plan);
  EXPECT_DOUBLE_EQ(plan.total_cost, solve_bruteforce(make({5, 10}, -7)).total_cost);
  // stock exactly covers demand
  plan = solve(make({3, 4}, 7));
  EXPECT_EQ(plan.orders, (std::vector<std::int64_t>{0, 0}));
  EXPECT_TRUE(plan.feasible);
  EXPECT_DOUBLE_EQ(plan.total_cost, 4.0);
}

TEST(Solve, ExcessStockIsFlaggedInfeasible) {
  const auto inst = make({3, 4}, 10);
  for (const auto& plan : {solve(inst), solve_bruteforce(inst)}) {
    EXPECT_FALSE(plan.feasible);
    EXPECT_EQ(plan.orders, (std::vector<std::int64_t>{0, 0}));
    EXPECT_EQ(plan.inventories, (std::vector<std::int64_t>{7, 3}));
    EXPECT_DOUBLE_EQ(plan.total_cost, 10.0);
  }
}

TEST(Solve, RejectsInvalidInstances) {
  EXPECT_THROW(solve(make({})), InvalidInput);
  EXPECT_THROW(solve(make({1, -1})), InvalidInput);
  EXPECT_THROW(solve(make({1}, 0, CostRates{-1.0, 1.0, 1.0})), InvalidInput);
}

TEST(SolveBruteforce, Examples) {
  EXPECT_DOUBLE_EQ(solve_bruteforce(make({0})).total_cost, 0.0);
  EXPECT_DOUBLE_EQ(solve_bruteforce(make({0, 0})).total_cost, 0.0);
  EXPECT_DOUBLE_EQ(solve_bruteforce(make({10})).total_cost, 64.0);
  EXPECT_DOUBLE_EQ(solve_bruteforce(make({10, 10})).total_cost, 74.0);
  EXPECT_DOUBLE_EQ(solve_bruteforce(make({1, 100})).total_cost, 73.0);
}

TEST(SolveBruteforce, GuardsStateSpace) {
  EXPECT_THROW(solve_bruteforce(make(std::vector<std::int64_t>(13, 1))), SizeError);
  EXPECT_THROW(solve_bruteforce(make({101, 100})), SizeError);
  EXPECT_NO_THROW(solve_bruteforce(make({100, 100})));
}

// Randomized equivalence against the state-space DP; also checks that both
// pick the same (smallest) optimal first order.
TEST(SolveProperty, MatchesBruteforce) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto inst = testing::random_small_instance(rng);
    const auto fast = solve(inst);
    const auto slow = solve_bruteforce(inst);
    ASSERT_EQ(fast.total_cost, slow.total_cost) << "trial " << trial;
    EXPECT_EQ(fast.orders.front(), slow.orders.front()) << "trial " << trial;
    EXPECT_EQ(fast.feasible, slow.feasible);
    expect_valid_plan(inst, fast);
    expect_valid_plan(inst, slow);
  }
}

TEST(SolveProperty, MatchesBruteforceWithOddRates) {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> periods(1, 10), demand(0, 15), stock(-6, 6), rate(0, 3), setup(0, 40);
  for (int trial = 0; trial < 500; ++trial) {
    LotSizingInstance inst;
    inst.demands.resize(static_cast<std::size_t>(periods(rng)));
    for (auto& d : inst.demands) d = demand(rng);
    inst.initial_inventory = stock(rng);
    inst.rates = CostRates{static_cast<double>(setup(rng)), static_cast<double>(rate(rng)),
                           static_cast<double>(3 * rate(rng))};
    ASSERT_EQ(solve(inst).total_cost, solve_bruteforce(inst).total_cost) << "trial " << trial;
  }
}

TEST(SolveProperty, SetupAndScaling) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    auto inst = testing::random_small_instance(rng);
    const auto base = solve(inst);
    auto more = inst;
    more.rates.setup += 10.0;
    EXPECT_GE(solve(more).total_cost, base.total_cost);

    auto scaled = inst;
    scaled.rates = CostRates{3.0 * inst.rates.setup, 3.0 * inst.rates.holding, 3.0 * inst.rates.penalty};
    const auto s = solve(scaled);
    EXPECT_NEAR(s.total_cost, 3.0 * base.total_cost, 1e-9);
    EXPECT_EQ(s.orders, base.orders);
  }
}

TEST(CostOfFirstOrder, Examples) {
  EXPECT_DOUBLE_EQ(cost_of_first_order(20, make({10, 10})).cost, 74.0);
  EXPECT_DOUBLE_EQ(cost_of_first_order(10, make({10, 10})).cost, 128.0);
  EXPECT_DOUBLE_EQ(cost_of_first_order(0, make({0, 0, 0})).cost, 0.0);
  EXPECT_TRUE(cost_of_first_order(0, make({0, 0, 0})).feasible);
  // residual starts with more stock than it needs
  const auto over = cost_of_first_order(30, make({10, 10}));
  EXPECT_FALSE(over.feasible);
  EXPECT_DOUBLE_EQ(over.cost, 64.0 + 20.0 + 10.0);
  EXPECT_THROW(cost_of_first_order(-1, make({1})), InvalidInput);
}

// The minimum of J_N(u1) over feasible u1 is the optimal plan cost, and the
// smallest minimizer is the solver's first order.
TEST(CostOfFirstOrderProperty, MinimumIsOptimalCost) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 300; ++trial) {
    const auto inst = testing::random_small_instance(rng);
    if (!inst.terminal_feasible()) continue;
    const std::int64_t need = inst.total_demand() - inst.initial_inventory;
    double best = std::numeric_limits<double>::infinity();
    std::int64_t argmin = -1;
    for (std::int64_t u1 = 0; u1 <= need + 3; ++u1) {
      const auto c = cost_of_first_order(u1, inst);
      if (c.feasible && c.cost < best) {
        best = c.cost;
        argmin = u1;
      }
    }
    const auto plan = solve(inst);
    EXPECT_EQ(best, plan.total_cost) << "trial " << trial;
    EXPECT_EQ(argmin, omega_solution(inst, false)) << "trial " << trial;
  }
}

TEST(OmegaSolution, Examples) {
  EXPECT_EQ(omega_solution(make({0, 0, 0}), false), 0);
  EXPECT_EQ(omega_solution(make({10, 10}), false), 20);
  EXPECT_EQ(omega_solution(make({1, 100}), false), 0);
}

TEST(OmegaSolution, ForcedOrderFollowsExhaustiveScan) {
  // J(1) = 64 + 0 + 64 beats J(101) = 64 + 100 and every u1 in between.
  const auto inst = make({1, 100});
  std::int64_t scan = -1;
  const double best = two_period_enumeration(inst, &scan, true);
  EXPECT_EQ(scan, 1);
  EXPECT_DOUBLE_EQ(best, 128.0);
  EXPECT_DOUBLE_EQ(cost_of_first_order(1, inst).cost, 128.0);
  EXPECT_DOUBLE_EQ(cost_of_first_order(101, inst).cost, 164.0);
  EXPECT_EQ(omega_solution(inst, true), 1);
  EXPECT_EQ(omega_solution(make({10, 10}), true), 20);
  // nothing left to cover: the smallest order
  EXPECT_EQ(omega_solution(make({0, 0}), true), 1);
  EXPECT_EQ(omega_solution(make({4}, 9), true), 1);
}

// Forced solution equals the smallest minimizer of J_N(u1) over feasible
// u1 >= 1, found by scanning.
TEST(OmegaSolutionProperty, ForcedMatchesScan) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto inst = testing::random_small_instance(rng);
    const std::int64_t need = inst.total_demand() - inst.initial_inventory;
    if (need < 1) continue;
    double best = std::numeric_limits<double>::infinity();
    std::int64_t argmin = -1;
    for (std::int64_t u1 = 1; u1 <= need; ++u1) {
      const auto c = cost_of_first_order(u1, inst);
      if (c.feasible && c.cost < best) {
        best = c.cost;
        argmin = u1;
      }
    }
    EXPECT_EQ(omega_solution(inst, true), argmin) << "trial " << trial;
  }
}

TEST(KConvexity, LinearSegmentHasNonNegativeMargin) {
  // x1 = u1 - 10 stays in the holding-only region for u1 in [20, 30]
  const auto inst = make({10, 0, 0, 30});
  const std::vector<KConvexityTriple> triples{{20, 25, 30}, {21, 22, 23}};
  EXPECT_TRUE(k_convexity_probe(inst, triples).empty());
}

TEST(KConvexity, RejectsBadTriples) {
  const std::vector<KConvexityTriple> bad{{0, 1, 2}};
  EXPECT_THROW(k_convexity_probe(make({5, 5}), bad), InvalidInput);
  const std::vector<KConvexityTriple> unordered{{3, 2, 4}};
  EXPECT_THROW(k_convexity_probe(make({5, 5}), unordered), InvalidInput);
}

TEST(KConvexityProperty, RandomInstancesHaveNoViolations) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    const auto inst = testing::random_small_instance(rng);
    const std::int64_t top = inst.total_demand() + 5;
    if (top < 3) continue;
    std::uniform_int_distribution<std::int64_t> pick(1, top);
    std::vector<KConvexityTriple> triples;
    while (triples.size() < 50) {
      std::int64_t a = pick(rng), b = pick(rng), c = pick(rng);
      if (a > b) std::swap(a, b);
      if (b > c) std::swap(b, c);
      if (a > b) std::swap(a, b);
      if (a < b && b < c) triples.push_back({a, b, c});
    }
    const auto v = k_convexity_probe(inst, triples);
    EXPECT_TRUE(v.empty()) << "trial " << trial << " first shortfall " << (v.empty() ? 0.0 : v[0].shortfall);
  }
}

TEST(InstanceRecord, RoundTripsAndRejectsMalformedText) {
  const auto inst = make({3, 0, 12}, -2, CostRates{16.0, 1.0, 9.0});
  std::stringstream buf;
  write_instance(buf, inst);
  const auto back = read_instance(buf);
  EXPECT_EQ(back.demands, inst.demands);
  EXPECT_EQ(back.initial_inventory, -2);
  EXPECT_DOUBLE_EQ(back.rates.setup, 16.0);
  EXPECT_DOUBLE_EQ(back.rates.penalty, 9.0);

  std::istringstream commas("2, 0, 64, 1, 9 # header\n10, 10\n");
  EXPECT_EQ(read_instance(commas).demands, (std::vector<std::int64_t>{10, 10}));

  std::istringstream too_few("3 0 64 1 9\n1 2\n");
  EXPECT_THROW(read_instance(too_few), InvalidInput);
  std::istringstream trailing("1 0 64 1 9\n1 2\n");
  EXPECT_THROW(read_instance(trailing), InvalidInput);
  std::istringstream header("x 0 64 1 9\n1\n");
  EXPECT_THROW(read_instance(header), InvalidInput);
}

}  // namespace
}  // namespace champion
