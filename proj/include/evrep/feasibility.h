#pragma once

#include <optional>
#include <span>
#include <string>

#include "evrep/model.h"

namespace evrep {

// Position of a worker while a route is being built visit by visit.
struct ScheduleState {
  bool route_started = false;
  Minutes start_time = 0;
  LocationIndex location = kDepot;
  std::optional<RequestKind> last_kind;
  Minutes last_arrival = 0;
  Minutes last_waiting = 0;
  // Pickup whose EV is being driven (valid when last_kind is Pickup).
  RequestId carried = 0;

  bool at_depot() const {
    return !last_kind.has_value();
  }
};

// Depot departure that makes the worker reach a first pickup exactly at its
// window opening.
Minutes first_departure(const Instance& instance, const Request& pickup);

// Arrival by bike at a pickup, after a delivery or from the depot.
Minutes arrival_at_pickup(const Instance& instance,
                          const ScheduleState& state,
                          const Request& pickup);

// Arrival with the EV picked up at the previous visit.
Minutes arrival_at_delivery(const Instance& instance,
                            const ScheduleState& state,
                            const Request& delivery);

// A delivery may start q' before its window opens so the EV is parked
// exactly at tw_min; a pickup cannot start before tw_min.
Minutes waiting_time(const Request& request,
                     Minutes arrival,
                     Minutes q_prime);

// Charge of a pickup's EV when its service starts, recharge capped at 1.
Fraction charge_at_pickup(const Instance& instance,
                          const Request& pickup,
                          Minutes service_start);

struct FeasibilityOptions {
  // Evaluates the pickup-to-delivery leg of the pickup duty bound at bike
  // speed instead of at EV speed.
  bool literal_pickup_duty = false;
};

bool pickup_feasible(const Instance& instance,
                     const ScheduleState& state,
                     const Request& pickup,
                     std::span<const RequestId> compatible_deliveries,
                     const FeasibilityOptions& options = {});

bool delivery_feasible(const Instance& instance,
                       const ScheduleState& state,
                       const Request& delivery);

// Duty-time part of the feasibility tests: appending the request (and, for a
// pickup, the cheapest compatible delivery) still allows returning to the
// depot within T.
bool route_close_check(const Instance& instance,
                       const ScheduleState& state,
                       const Request& request,
                       std::span<const RequestId> compatible_deliveries = {},
                       const FeasibilityOptions& options = {});

// Appends a request to the state and returns its scheduled visit.
ScheduledVisit append_visit(const Instance& instance,
                            ScheduleState& state,
                            const Request& request);

// Schedules a fixed alternating sequence from a given depot departure.
RouteSchedule schedule_route(const Instance& instance,
                             Minutes start_time,
                             std::span<const RequestId> sequence,
                             int worker = 0);

std::vector<RequestId> route_sequence(const RouteSchedule& route);

enum class Condition {
  Structure,
  UnknownRequest,
  Snapshot,
  StoredTiming,
  PickupWindow,
  PickupDuty,
  DeliveryWindow,
  DeliveryDuty,
  BatteryRange,
  BatteryTarget,
  Duty,
  Duplicate,
  WorkerLimit,
  Accounting,
};

const char* to_string(Condition condition);

struct Violation {
  Condition condition = Condition::Structure;
  int route = -1;
  int visit = -1;
  std::string detail;
};

struct ValidationResult {
  std::optional<Violation> violation;

  bool ok() const {
    return !violation.has_value();
  }
  explicit operator bool() const {
    return ok();
  }

  std::string to_text() const;
  static std::string csv_header();
  std::string to_csv_row(const std::string& label) const;
};

struct ValidatorOptions {
  bool literal_pickup_duty = false;
};

// Replays the route from its depot departure, recomputing every arrival,
// waiting time and charge, and checks all per-visit conditions.
ValidationResult validate_route(const RouteSchedule& route,
                                const Instance& instance,
                                const ValidatorOptions& options = {});

ValidationResult validate_solution(const Solution& solution,
                                   const Instance& instance,
                                   const ValidatorOptions& options = {});

} // namespace evrep
