#include <gtest/gtest.h>

#include "evrep/feasibility.h"
#include "evrep/model.h"
#include "fixtures.h"

using namespace evrep;
using namespace evrep::testing;

namespace {

Instance two_pair_instance() {
  std::vector<Request> r = {
    pickup(1, 1, 0, 100),
    delivery(2, 2, 0, 200),
  };
  return Instance(unit_parameters(), r, uniform_distances(3, 5));
}

} // namespace

TEST(Parameters, DefaultsMatchReferenceValues) {
  const Parameters p;
  EXPECT_EQ(p.duty_time, 300);
  EXPECT_EQ(p.ev_speed, 25);
  EXPECT_EQ(p.bike_speed, 15);
  EXPECT_EQ(p.park_and_unfold, 1);
  EXPECT_EQ(p.load_bike, 1);
  EXPECT_EQ(p.full_range, 150);
  EXPECT_EQ(p.full_recharge_time, 240);
  EXPECT_EQ(p.worker_cost, 60);
  EXPECT_TRUE(check_parameters(p).empty());
}

TEST(Parameters, RejectsNonPositiveFields) {
  Parameters p;
  p.ev_speed = 0;
  p.duty_time = -1;
  p.worker_count = 0;
  p.worker_cost = -5;
  EXPECT_EQ(check_parameters(p).size(), 4u);
}

TEST(Instance, RejectsInvertedWindow) {
  std::vector<Request> r = {pickup(1, 1, 50, 10)};
  EXPECT_THROW(Instance(unit_parameters(), r, uniform_distances(2, 1)),
               InvalidInstanceError);
}

TEST(Instance, RejectsNegativeDistance) {
  auto d = uniform_distances(2, 1);
  d[0][1] = -1;
  EXPECT_THROW(Instance(unit_parameters(), {pickup(1, 1, 0, 10)}, d),
               InvalidInstanceError);
}

TEST(Instance, RejectsTriangleViolation) {
  auto d = uniform_distances(3, 1);
  d[1][2] = 5;
  std::vector<Request> r = {pickup(1, 1, 0, 10), delivery(2, 2, 0, 10)};
  EXPECT_THROW(Instance(unit_parameters(), r, d), InvalidInstanceError);
}

TEST(Instance, ReportsEveryViolation) {
  std::vector<Request> r = {pickup(1, 1, 50, 10, 1.5), delivery(1, 2, 0, 10)};
  auto d = uniform_distances(3, 1);
  d[2][2] = 3;
  try {
    Instance(unit_parameters(), r, d);
    FAIL() << "expected InvalidInstanceError";
  } catch (const InvalidInstanceError& e) {
    EXPECT_GE(e.violations().size(), 4u);
    EXPECT_EQ(e.kind(), ErrorKind::InvalidInstance);
  }
}

TEST(Instance, LooksUpRequestsById) {
  const auto inst = two_pair_instance();
  EXPECT_TRUE(inst.contains(2));
  EXPECT_EQ(inst.position(2), 1u);
  EXPECT_EQ(inst.request(1).kind, RequestKind::Pickup);
  try {
    inst.request(9);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnknownRequest);
  }
}

TEST(TravelTime, ZeroDistanceIsFree) {
  Parameters p;
  const Instance inst(p, {pickup(1, 1, 0, 10)}, uniform_distances(2, 5));
  EXPECT_EQ(travel_time(inst, 1, 1, TravelMode::Bike), 0);
  EXPECT_EQ(travel_time(inst, 0, 0, TravelMode::EV), 0);
}

TEST(TravelTime, ConvertsKilometresToMinutes) {
  Parameters p; // s'' = 15, s' = 25
  const Instance inst(p, {pickup(1, 1, 0, 10)}, uniform_distances(2, 5));
  EXPECT_DOUBLE_EQ(travel_time(inst, 0, 1, TravelMode::Bike), 20);
  EXPECT_DOUBLE_EQ(travel_time(inst, 0, 1, TravelMode::EV), 12);
}

TEST(TravelTime, RejectsOutOfRangeLocation) {
  const auto inst = two_pair_instance();
  try {
    travel_time(inst, 0, 7, TravelMode::Bike);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::IndexOutOfRange);
  }
}

TEST(EvaluateProfit, EmptySolutionIsZero) {
  const auto inst = tradeoff_instance();
  const auto s = make_solution(inst, {});
  EXPECT_EQ(evaluate_profit(s, inst), 0);
  EXPECT_EQ(count_served(s), 0u);
}

TEST(EvaluateProfit, OneRouteOfFourRequests) {
  const auto inst = tradeoff_instance();
  const RequestId seq[] = {1, 6, 2, 7};
  auto route = schedule_route(inst, 0, seq);
  const auto s = make_solution(inst, {route});
  EXPECT_DOUBLE_EQ(evaluate_profit(s, inst), 10);
  EXPECT_EQ(count_served(s), 4u);
}

TEST(EvaluateProfit, TwoRoutesOfSixRequests) {
  const auto inst = tradeoff_instance();
  const RequestId a[] = {1, 6};
  const RequestId b[] = {3, 8, 2, 7};
  const auto s =
    make_solution(inst, {schedule_route(inst, 0, a), schedule_route(inst, 0, b)});
  EXPECT_DOUBLE_EQ(evaluate_profit(s, inst), 0);
  EXPECT_EQ(count_served(s), 6u);
  EXPECT_EQ(s.rejected.size(), 4u);
}

TEST(EvaluateProfit, DetectsStoredMismatch) {
  const auto inst = tradeoff_instance();
  const RequestId seq[] = {1, 6, 2, 7};
  auto s = make_solution(inst, {schedule_route(inst, 0, seq)});
  s.profit += 1;
  try {
    evaluate_profit(s, inst);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::AccountingMismatch);
  }
}

TEST(EvaluateProfit, UnknownServedId) {
  const auto inst = tradeoff_instance();
  Solution s;
  s.served = {42};
  try {
    evaluate_profit(s, inst);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnknownRequest);
  }
}

TEST(EvaluateProfit, UnitRevenueAndFreeWorkersCountRequests) {
  auto base = tradeoff_instance();
  auto p = base.parameters();
  p.worker_cost = 0;
  auto requests = base.requests();
  for (auto& r : requests) {
    r.revenue = 1;
  }
  const Instance inst(p, requests, base.distance_matrix());
  const RequestId a[] = {1, 6};
  const RequestId b[] = {3, 8, 2, 7};
  const auto s =
    make_solution(inst, {schedule_route(inst, 0, a), schedule_route(inst, 0, b)});
  EXPECT_DOUBLE_EQ(evaluate_profit(s, inst),
                   static_cast<double>(count_served(s)));
}

TEST(Solution, MakeSolutionRenumbersWorkers) {
  const auto inst = tradeoff_instance();
  const RequestId a[] = {1, 6};
  const RequestId b[] = {3, 8};
  const auto s = make_solution(
    inst, {schedule_route(inst, 0, a, 5), schedule_route(inst, 0, b, 9)});
  EXPECT_EQ(s.routes[0].worker, 0);
  EXPECT_EQ(s.routes[1].worker, 1);
  EXPECT_EQ(s.served, (std::vector<RequestId>{1, 3, 6, 8}));
}

TEST(Solution, BetterSolutionPrefersFewerRoutesOnTies) {
  const auto inst = tradeoff_instance();
  const RequestId a[] = {1, 6, 2, 7};
  const RequestId b[] = {1, 6};
  const RequestId c[] = {2, 7};
  const auto one = make_solution(inst, {schedule_route(inst, 0, a)});
  const auto two =
    make_solution(inst, {schedule_route(inst, 0, b), schedule_route(inst, 0, c)});
  EXPECT_TRUE(better_solution(one, two, Objective::Requests));
  EXPECT_FALSE(better_solution(two, one, Objective::Requests));
  EXPECT_TRUE(better_solution(one, two, Objective::Profit));
}

TEST(Instance, RepricesFixedRevenueComponent) {
  std::vector<Request> r = {pickup(1, 1, 0, 10), delivery(2, 2, 0, 10)};
  r[0].rent_minutes = 10;
  r[1].rent_minutes = 5;
  const Instance inst(unit_parameters(), r, uniform_distances(3, 1), VrcFrcRevenue{});
  const auto repriced = inst.with_frc(0);
  EXPECT_DOUBLE_EQ(repriced.request(1).revenue, 2.9);
  EXPECT_DOUBLE_EQ(repriced.request(2).revenue, 1.45);
  EXPECT_DOUBLE_EQ(inst.with_frc(15).request(1).revenue, 17.9);
  EXPECT_THROW(two_pair_instance().with_frc(5), Error);
}

TEST(Objective, ParsesNames) {
  EXPECT_EQ(objective_from_string("profit"), Objective::Profit);
  EXPECT_EQ(objective_from_string("requests"), Objective::Requests);
  EXPECT_THROW(objective_from_string("money"), Error);
}
