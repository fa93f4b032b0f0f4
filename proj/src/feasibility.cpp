#include "evrep/feasibility.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

namespace evrep {

Minutes first_departure(const Instance& instance, const Request& pickup) {
  return pickup.tw_min - instance.bike_time(kDepot, pickup.location);
}

Minutes arrival_at_pickup(const Instance& instance,
                          const ScheduleState& state,
                          const Request& pickup) {
  if (!pickup.is_pickup()) {
    throw Error(ErrorKind::WrongKind,
                "request " + std::to_string(pickup.id) + " is not a pickup");
  }
  if (state.at_depot()) {
    const Minutes start = state.route_started
                            ? state.start_time
                            : first_departure(instance, pickup);
    return start + instance.bike_time(kDepot, pickup.location);
  }
  if (*state.last_kind != RequestKind::Delivery) {
    throw Error(ErrorKind::WrongKind,
                "a pickup must follow a delivery or the depot");
  }
  return state.last_arrival + state.last_waiting +
         instance.parameters().park_and_unfold +
         instance.bike_time(state.location, pickup.location);
}

Minutes arrival_at_delivery(const Instance& instance,
                            const ScheduleState& state,
                            const Request& delivery) {
  if (!delivery.is_delivery()) {
    throw Error(ErrorKind::WrongKind,
                "request " + std::to_string(delivery.id) +
                  " is not a delivery");
  }
  if (state.last_kind != RequestKind::Pickup) {
    throw Error(ErrorKind::WrongKind, "a delivery must follow a pickup");
  }
  return state.last_arrival + state.last_waiting +
         instance.parameters().load_bike +
         instance.ev_time(state.location, delivery.location);
}

Minutes waiting_time(const Request& request,
                     Minutes arrival,
                     Minutes q_prime) {
  if (request.is_delivery()) {
    return std::max(0.0, request.tw_min - arrival - q_prime);
  }
  return std::max(0.0, request.tw_min - arrival);
}

Fraction charge_at_pickup(const Instance& instance,
                          const Request& pickup,
                          Minutes service_start) {
  return std::min(pickup.battery +
                    (service_start - pickup.tw_min) /
                      instance.parameters().full_recharge_time,
                  1.0);
}

namespace {

Minutes pickup_to_delivery_time(const Instance& instance,
                                LocationIndex from,
                                LocationIndex to,
                                bool literal) {
  return literal ? instance.bike_time(from, to) : instance.ev_time(from, to);
}

// Cheapest way to complete a pickup: drive to a delivery and bike home.
std::optional<Minutes>
cheapest_completion(const Instance& instance,
                    const Request& pickup,
                    std::span<const RequestId> deliveries,
                    bool literal) {
  std::optional<Minutes> best;
  for (RequestId id : deliveries) {
    const auto& d = instance.request(id);
    const Minutes cost =
      pickup_to_delivery_time(instance, pickup.location, d.location, literal) +
      instance.bike_time(d.location, kDepot);
    if (!best || cost < *best) {
      best = cost;
    }
  }
  return best;
}

bool pickup_duty_ok(const Instance& instance,
                    const ScheduleState& state,
                    const Request& pickup,
                    Minutes arrival,
                    std::span<const RequestId> deliveries,
                    bool literal) {
  const auto completion =
    cheapest_completion(instance, pickup, deliveries, literal);
  if (!completion) {
    return false;
  }
  const auto& p = instance.parameters();
  const Minutes start =
    state.route_started ? state.start_time : first_departure(instance, pickup);
  const Minutes service = std::max(arrival, pickup.tw_min);
  return service + p.load_bike + *completion + p.park_and_unfold - start <=
         p.duty_time + kTimeEps;
}

} // namespace

bool pickup_feasible(const Instance& instance,
                     const ScheduleState& state,
                     const Request& pickup,
                     std::span<const RequestId> compatible_deliveries,
                     const FeasibilityOptions& options) {
  const Minutes arrival = arrival_at_pickup(instance, state, pickup);
  if (arrival > pickup.tw_max + kTimeEps) {
    return false;
  }
  return pickup_duty_ok(instance,
                        state,
                        pickup,
                        arrival,
                        compatible_deliveries,
                        options.literal_pickup_duty);
}

bool delivery_feasible(const Instance& instance,
                       const ScheduleState& state,
                       const Request& delivery) {
  const auto& p = instance.parameters();
  const Minutes arrival = arrival_at_delivery(instance, state, delivery);
  if (arrival > delivery.tw_max + kTimeEps) {
    return false;
  }
  const Minutes service =
    arrival + waiting_time(delivery, arrival, p.park_and_unfold);
  if (service + p.park_and_unfold +
        instance.bike_time(delivery.location, kDepot) - state.start_time >
      p.duty_time + kTimeEps) {
    return false;
  }
  const auto& pickup = instance.request(state.carried);
  const Fraction after_leg =
    charge_at_pickup(instance, pickup, state.last_arrival + state.last_waiting) -
    instance.distance(pickup.location, delivery.location) / p.full_range;
  if (after_leg < -kBatteryEps) {
    return false;
  }
  return after_leg + (delivery.tw_max - arrival) / p.full_recharge_time >=
         delivery.battery - kBatteryEps;
}

bool route_close_check(const Instance& instance,
                       const ScheduleState& state,
                       const Request& request,
                       std::span<const RequestId> compatible_deliveries,
                       const FeasibilityOptions& options) {
  const auto& p = instance.parameters();
  if (request.is_pickup()) {
    return pickup_duty_ok(instance,
                          state,
                          request,
                          arrival_at_pickup(instance, state, request),
                          compatible_deliveries,
                          options.literal_pickup_duty);
  }
  const Minutes arrival = arrival_at_delivery(instance, state, request);
  const Minutes service =
    arrival + waiting_time(request, arrival, p.park_and_unfold);
  return service + p.park_and_unfold +
           instance.bike_time(request.location, kDepot) - state.start_time <=
         p.duty_time + kTimeEps;
}

ScheduledVisit append_visit(const Instance& instance,
                            ScheduleState& state,
                            const Request& request) {
  const auto& p = instance.parameters();
  ScheduledVisit visit;
  visit.request = request.id;
  visit.kind = request.kind;
  visit.tw_min = request.tw_min;
  visit.tw_max = request.tw_max;
  visit.battery_demand = request.battery;
  if (request.is_pickup()) {
    if (!state.route_started) {
      state.start_time = first_departure(instance, request);
      state.route_started = true;
    }
    visit.arrival = arrival_at_pickup(instance, state, request);
    visit.waiting = waiting_time(request, visit.arrival, p.park_and_unfold);
    visit.battery_at_pickup =
      charge_at_pickup(instance, request, visit.service_start());
    state.carried = request.id;
  } else {
    visit.arrival = arrival_at_delivery(instance, state, request);
    visit.waiting = waiting_time(request, visit.arrival, p.park_and_unfold);
  }
  state.location = request.location;
  state.last_kind = request.kind;
  state.last_arrival = visit.arrival;
  state.last_waiting = visit.waiting;
  return visit;
}

RouteSchedule schedule_route(const Instance& instance,
                             Minutes start_time,
                             std::span<const RequestId> sequence,
                             int worker) {
  RouteSchedule route;
  route.worker = worker;
  route.start_time = start_time;
  ScheduleState state;
  state.route_started = true;
  state.start_time = start_time;
  route.visits.reserve(sequence.size());
  for (RequestId id : sequence) {
    route.visits.push_back(append_visit(instance, state, instance.request(id)));
  }
  if (route.visits.empty()) {
    route.end_time = start_time;
  } else {
    route.end_time = state.last_arrival + state.last_waiting +
                     instance.parameters().park_and_unfold +
                     instance.bike_time(state.location, kDepot);
  }
  return route;
}

std::vector<RequestId> route_sequence(const RouteSchedule& route) {
  std::vector<RequestId> out;
  out.reserve(route.visits.size());
  for (const auto& v : route.visits) {
    out.push_back(v.request);
  }
  return out;
}

const char* to_string(Condition condition) {
  switch (condition) {
  case Condition::Structure:
    return "structure";
  case Condition::UnknownRequest:
    return "unknown_request";
  case Condition::Snapshot:
    return "request_snapshot";
  case Condition::StoredTiming:
    return "stored_timing";
  case Condition::PickupWindow:
    return "pickup_window";
  case Condition::PickupDuty:
    return "pickup_duty";
  case Condition::DeliveryWindow:
    return "delivery_window";
  case Condition::DeliveryDuty:
    return "delivery_duty";
  case Condition::BatteryRange:
    return "battery_range";
  case Condition::BatteryTarget:
    return "battery_target";
  case Condition::Duty:
    return "duty";
  case Condition::Duplicate:
    return "duplicate";
  case Condition::WorkerLimit:
    return "worker_limit";
  case Condition::Accounting:
    return "accounting";
  }
  return "unknown";
}

std::string ValidationResult::to_text() const {
  if (ok()) {
    return "OK";
  }
  std::ostringstream out;
  out << "VIOLATION " << to_string(violation->condition);
  if (violation->route >= 0) {
    out << " route " << violation->route;
  }
  if (violation->visit >= 0) {
    out << " visit " << violation->visit;
  }
  if (!violation->detail.empty()) {
    out << ": " << violation->detail;
  }
  return out.str();
}

std::string ValidationResult::csv_header() {
  return "label,status,condition,route,visit,detail";
}

std::string ValidationResult::to_csv_row(const std::string& label) const {
  std::ostringstream out;
  out << label << ',';
  if (ok()) {
    out << "ok,,,,";
    return out.str();
  }
  std::string detail = violation->detail;
  std::replace(detail.begin(), detail.end(), ',', ';');
  out << "violation," << to_string(violation->condition) << ','
      << violation->route << ',' << violation->visit << ',' << detail;
  return out.str();
}

namespace {

ValidationResult fail(Condition c, int visit, std::string detail) {
  return ValidationResult{Violation{c, -1, visit, std::move(detail)}};
}

std::string describe(const char* what, double value, double bound) {
  std::ostringstream out;
  out.precision(17);
  out << what << ' ' << value << " vs " << bound;
  return out.str();
}

bool close(double a, double b, double eps) {
  return std::abs(a - b) <= eps;
}

} // namespace

ValidationResult validate_route(const RouteSchedule& route,
                                const Instance& instance,
                                const ValidatorOptions& options) {
  const auto& visits = route.visits;
  if (visits.empty()) {
    return fail(Condition::Structure, -1, "route has no visits");
  }
  if (visits.size() % 2 != 0) {
    return fail(Condition::Structure,
                static_cast<int>(visits.size()) - 1,
                "route must end with a delivery");
  }
  for (std::size_t i = 0; i < visits.size(); ++i) {
    const int at = static_cast<int>(i);
    if (!instance.contains(visits[i].request)) {
      return fail(Condition::UnknownRequest,
                  at,
                  "request " + std::to_string(visits[i].request));
    }
    const auto& r = instance.request(visits[i].request);
    const RequestKind expected =
      i % 2 == 0 ? RequestKind::Pickup : RequestKind::Delivery;
    if (r.kind != expected || visits[i].kind != expected) {
      return fail(Condition::Structure,
                  at,
                  std::string("expected a ") + to_string(expected));
    }
    if (!close(visits[i].tw_min, r.tw_min, kTimeEps) ||
        !close(visits[i].tw_max, r.tw_max, kTimeEps) ||
        !close(visits[i].battery_demand, r.battery, kBatteryEps)) {
      return fail(Condition::Snapshot,
                  at,
                  "visit data differs from request " + std::to_string(r.id));
    }
  }

  const auto& p = instance.parameters();
  const Minutes start = route.start_time;
  LocationIndex location = kDepot;
  Minutes departure = start; // leaving the previous stop
  Minutes pickup_service = 0;
  const Request* pickup = nullptr;

  for (std::size_t i = 0; i < visits.size(); ++i) {
    const int at = static_cast<int>(i);
    const auto& stored = visits[i];
    const auto& r = instance.request(stored.request);
    std::optional<Fraction> battery;
    Minutes arrival = 0;
    Minutes waiting = 0;

    if (r.is_pickup()) {
      arrival = departure + instance.bike_time(location, r.location);
      waiting = waiting_time(r, arrival, p.park_and_unfold);
      if (arrival > r.tw_max + kTimeEps) {
        return fail(Condition::PickupWindow,
                    at,
                    describe("arrival", arrival, r.tw_max));
      }
      const auto& next = instance.request(visits[i + 1].request);
      const Minutes leg = options.literal_pickup_duty
                            ? instance.bike_time(r.location, next.location)
                            : instance.ev_time(r.location, next.location);
      const Minutes bound = arrival + waiting + p.load_bike + leg +
                            instance.bike_time(next.location, kDepot) +
                            p.park_and_unfold - start;
      if (bound > p.duty_time + kTimeEps) {
        return fail(Condition::PickupDuty,
                    at,
                    describe("duration bound", bound, p.duty_time));
      }
      pickup_service = arrival + waiting;
      battery = charge_at_pickup(instance, r, pickup_service);
      pickup = &r;
      departure = pickup_service + p.load_bike;
    } else {
      arrival = departure + instance.ev_time(location, r.location);
      waiting = waiting_time(r, arrival, p.park_and_unfold);
      if (arrival > r.tw_max + kTimeEps) {
        return fail(Condition::DeliveryWindow,
                    at,
                    describe("arrival", arrival, r.tw_max));
      }
      const Minutes back = arrival + waiting + p.park_and_unfold +
                           instance.bike_time(r.location, kDepot) - start;
      if (back > p.duty_time + kTimeEps) {
        return fail(Condition::DeliveryDuty,
                    at,
                    describe("duration bound", back, p.duty_time));
      }
      const Fraction after_leg =
        charge_at_pickup(instance, *pickup, pickup_service) -
        instance.distance(pickup->location, r.location) / p.full_range;
      if (after_leg < -kBatteryEps) {
        return fail(Condition::BatteryRange,
                    at,
                    describe("charge after leg", after_leg, 0.0));
      }
      const Fraction at_deadline =
        after_leg + (r.tw_max - arrival) / p.full_recharge_time;
      if (at_deadline < r.battery - kBatteryEps) {
        return fail(Condition::BatteryTarget,
                    at,
                    describe("charge at deadline", at_deadline, r.battery));
      }
      departure = arrival + waiting + p.park_and_unfold;
    }

    if (!close(stored.arrival, arrival, kTimeEps) ||
        !close(stored.waiting, waiting, kTimeEps)) {
      return fail(Condition::StoredTiming,
                  at,
                  describe("stored arrival", stored.arrival, arrival) + "; " +
                    describe("stored waiting", stored.waiting, waiting));
    }
    if (stored.battery_at_pickup.has_value() != battery.has_value() ||
        (battery && !close(*stored.battery_at_pickup, *battery, kTimeEps))) {
      return fail(Condition::StoredTiming, at, "stored battery differs");
    }
    location = r.location;
  }

  const Minutes end = departure + instance.bike_time(location, kDepot);
  if (!close(route.end_time, end, kTimeEps)) {
    return fail(Condition::StoredTiming,
                -1,
                describe("stored end time", route.end_time, end));
  }
  if (end - start > p.duty_time + kTimeEps) {
    return fail(Condition::Duty, -1, describe("duration", end - start, p.duty_time));
  }
  return {};
}

ValidationResult validate_solution(const Solution& solution,
                                   const Instance& instance,
                                   const ValidatorOptions& options) {
  const auto& p = instance.parameters();
  auto fail_at = [](Condition c, int route, int visit, std::string detail) {
    return ValidationResult{Violation{c, route, visit, std::move(detail)}};
  };

  if (solution.routes.size() > static_cast<std::size_t>(p.worker_count)) {
    return fail_at(Condition::WorkerLimit,
                   -1,
                   -1,
                   std::to_string(solution.routes.size()) + " routes for " +
                     std::to_string(p.worker_count) + " workers");
  }

  std::set<RequestId> seen;
  std::set<int> workers;
  for (std::size_t k = 0; k < solution.routes.size(); ++k) {
    const auto& route = solution.routes[k];
    if (route.worker < 0 || route.worker >= p.worker_count ||
        !workers.insert(route.worker).second) {
      return fail_at(Condition::Structure,
                     static_cast<int>(k),
                     -1,
                     "invalid or repeated worker id " +
                       std::to_string(route.worker));
    }
    for (std::size_t i = 0; i < route.visits.size(); ++i) {
      if (!seen.insert(route.visits[i].request).second) {
        return fail_at(Condition::Duplicate,
                       static_cast<int>(k),
                       static_cast<int>(i),
                       "request " + std::to_string(route.visits[i].request) +
                         " served twice");
      }
    }
  }

  for (std::size_t k = 0; k < solution.routes.size(); ++k) {
    auto result = validate_route(solution.routes[k], instance, options);
    if (!result.ok()) {
      result.violation->route = static_cast<int>(k);
      return result;
    }
  }

  const std::vector<RequestId> served(seen.begin(), seen.end());
  if (solution.served != served) {
    return fail_at(Condition::Accounting,
                   -1,
                   -1,
                   "served set differs from routed requests");
  }
  std::vector<RequestId> rejected;
  Euros revenue = 0;
  for (const auto& r : instance.requests()) {
    if (seen.contains(r.id)) {
      revenue += r.revenue;
    } else {
      rejected.push_back(r.id);
    }
  }
  std::sort(rejected.begin(), rejected.end());
  if (solution.rejected != rejected) {
    return fail_at(Condition::Accounting,
                   -1,
                   -1,
                   "rejected set is not the complement of the served set");
  }
  const Euros cost =
    p.worker_cost * static_cast<double>(solution.routes.size());
  auto money_close = [](double a, double b) {
    return std::abs(a - b) <= 1e-9 * (1.0 + std::abs(b));
  };
  if (!money_close(solution.total_revenue, revenue)) {
    return fail_at(Condition::Accounting,
                   -1,
                   -1,
                   describe("total revenue", solution.total_revenue, revenue));
  }
  if (!money_close(solution.worker_cost, cost)) {
    return fail_at(Condition::Accounting,
                   -1,
                   -1,
                   describe("worker cost", solution.worker_cost, cost));
  }
  if (!money_close(solution.profit, revenue - cost)) {
    return fail_at(Condition::Accounting,
                   -1,
                   -1,
                   describe("profit", solution.profit, revenue - cost));
  }
  return {};
}

} // namespace evrep
