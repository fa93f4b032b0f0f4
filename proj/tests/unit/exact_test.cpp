#include <gtest/gtest.h>

#include <random>

#include "evrep/exact.h"
#include "evrep/generator.h"
#include "evrep/greedy.h"
#include "evrep/insertion.h"
#include "fixtures.h"

using namespace evrep;
using namespace evrep::testing;

namespace {

std::vector<Instance> small_instances(int count, std::uint64_t seed) {
  return make_benchmark(BenchmarkSet::AmatLike, count, seed, {4, 4});
}

std::vector<std::vector<RequestId>> served_routes(const Solution& s) {
  std::vector<std::vector<RequestId>> out;
  for (const auto& r : s.routes) {
    out.push_back(route_sequence(r));
  }
  return out;
}

} // namespace

TEST(SolveExact, TradeOffRequests) {
  const auto inst = tradeoff_instance();
  const auto r = solve_exact(inst, Objective::Requests);
  EXPECT_TRUE(r.optimal);
  EXPECT_EQ(r.solution.served.size(), 6u);
  EXPECT_NEAR(r.solution.profit, 0, 1e-9);
  EXPECT_TRUE(validate_solution(r.solution, inst).ok());
}

TEST(SolveExact, TradeOffProfit) {
  const auto inst = tradeoff_instance();
  const auto r = solve_exact(inst, Objective::Profit);
  EXPECT_EQ(r.solution.served.size(), 4u);
  EXPECT_NEAR(r.solution.profit, 10, 1e-9);
  EXPECT_EQ(served_routes(r.solution),
            (std::vector<std::vector<RequestId>>{{1, 6, 2, 7}}));
  EXPECT_TRUE(validate_solution(r.solution, inst).ok());
}

TEST(SolveExact, EmptyInstance) {
  const Instance inst(unit_parameters(), {}, uniform_distances(1, 0));
  const auto r = solve_exact(inst, Objective::Profit);
  EXPECT_TRUE(r.solution.routes.empty());
  EXPECT_TRUE(r.optimal);
}

TEST(SolveExact, RejectsLargeInstances) {
  const auto inst = tradeoff_instance();
  OracleLimits limits;
  limits.max_requests = 8;
  try {
    solve_exact(inst, Objective::Profit, limits);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InstanceTooLarge);
  }
}

TEST(SolveExact, NodeLimitStopsEarly) {
  OracleLimits limits;
  limits.max_nodes = 3;
  const auto r = solve_exact(tradeoff_instance(), Objective::Requests, limits);
  EXPECT_FALSE(r.optimal);
  EXPECT_TRUE(validate_solution(r.solution, tradeoff_instance()).ok());
}

TEST(SolveExact, DominatesHeuristics) {
  for (const auto& inst : small_instances(8, 17)) {
    for (auto objective : {Objective::Profit, Objective::Requests}) {
      const auto exact = solve_exact(inst, objective).solution;
      ASSERT_TRUE(validate_solution(exact, inst).ok());
      GreedyOptions g;
      g.objective = objective;
      RhConfig rh;
      rh.iterations = 50;
      rh.objective = objective;
      const Solution heuristics[] = {
        run_greedy(inst, GreedyPolicy::NearestNeighborhood, g),
        run_greedy(inst, GreedyPolicy::MostUrgent, g),
        run_ch(inst, objective),
        run_rh(inst, rh),
      };
      for (const auto& h : heuristics) {
        EXPECT_GE(objective_value(exact, objective), objective_value(h, objective) - 1e-9);
      }
    }
  }
}

TEST(SolveExact, UnitRevenueFreeWorkersAgree) {
  for (auto inst : small_instances(6, 29)) {
    auto requests = inst.requests();
    for (auto& r : requests) {
      r.revenue = 1;
    }
    auto p = inst.parameters();
    p.worker_cost = 0;
    inst = Instance(p, requests, inst.distance_matrix());
    EXPECT_NEAR(solve_exact(inst, Objective::Profit).solution.profit,
                static_cast<double>(solve_exact(inst, Objective::Requests).solution.served.size()),
                1e-9);
  }
}

TEST(SolveExact, Deterministic) {
  for (const auto& inst : small_instances(3, 5)) {
    EXPECT_EQ(solve_exact(inst, Objective::Profit).solution,
              solve_exact(inst, Objective::Profit).solution);
  }
}

TEST(FeasibleDepartures, FirstPairInterval) {
  // Pickup [100, 200] reached by a 60 minute bike ride; delivery due by 300.
  Parameters p = unit_parameters();
  std::vector<Request> r = {pickup(1, 1, 100, 200), delivery(2, 2, 180, 300)};
  auto d = uniform_distances(3, 30);
  d[1][2] = d[2][1] = 50;
  const Instance inst(p, r, d);
  const RequestId seq[] = {1, 2};
  const auto interval = feasible_departures(inst, seq);
  ASSERT_TRUE(interval.has_value());
  EXPECT_NEAR(interval->latest, 140, 1e-9);
  const auto route = schedule_sequence(inst, seq);
  ASSERT_TRUE(route.has_value());
  EXPECT_NEAR(route->start_time, 40, 1e-9);
}

TEST(FeasibleDepartures, InfeasibleSequence) {
  Parameters p = unit_parameters();
  std::vector<Request> r = {pickup(1, 1, 100, 110), delivery(2, 2, 0, 120)};
  auto d = uniform_distances(3, 30);
  d[1][2] = d[2][1] = 50;
  const Instance inst(p, r, d);
  const RequestId seq[] = {1, 2};
  EXPECT_FALSE(feasible_departures(inst, seq).has_value());
  EXPECT_FALSE(schedule_sequence(inst, seq).has_value());
}

TEST(FeasibleDepartures, AgreesWithDiscretizedStarts) {
  std::mt19937_64 rng(3);
  int checked = 0;
  int feasible_found = 0;
  for (const auto& inst : make_benchmark(BenchmarkSet::AmatLike, 6, 41, {5, 5})) {
    std::vector<RequestId> pickups;
    std::vector<RequestId> deliveries;
    for (const auto& r : inst.requests()) {
      (r.is_pickup() ? pickups : deliveries).push_back(r.id);
    }
    if (pickups.empty() || deliveries.empty()) {
      continue;
    }
    for (int trial = 0; trial < 60; ++trial) {
      std::shuffle(pickups.begin(), pickups.end(), rng);
      std::shuffle(deliveries.begin(), deliveries.end(), rng);
      const std::size_t pairs = 1 + rng() % std::min<std::size_t>(
                                          2, std::min(pickups.size(), deliveries.size()));
      std::vector<RequestId> seq;
      for (std::size_t k = 0; k < pairs; ++k) {
        seq.push_back(pickups[k]);
        seq.push_back(deliveries[k]);
      }
      const auto interval = feasible_departures(inst, seq);
      bool any = false;
      for (Minutes start = -200; start <= 700; start += 0.5) {
        const bool ok = validate_route(schedule_route(inst, start, seq), inst).ok();
        any = any || ok;
        if (ok) {
          ASSERT_TRUE(interval.has_value());
          EXPECT_GE(start, interval->earliest - 1e-6);
          EXPECT_LE(start, interval->latest + 1e-6);
        }
      }
      if (interval) {
        ++feasible_found;
        for (Minutes start : {interval->earliest, interval->latest}) {
          EXPECT_TRUE(validate_route(schedule_route(inst, start, seq), inst).ok());
        }
      }
      EXPECT_TRUE(!any || interval.has_value());
      ++checked;
    }
  }
  EXPECT_GT(checked, 100);
  EXPECT_GT(feasible_found, 10);
}

TEST(OptimalityGap, Values) {
  EXPECT_NEAR(*optimality_gap(90.0, 100.0), 10, 1e-12);
  EXPECT_EQ(*optimality_gap(0.0, 0.0), 0);
  EXPECT_FALSE(optimality_gap(5.0, 0.0).has_value());
}
