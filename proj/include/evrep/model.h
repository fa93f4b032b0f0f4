#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "evrep/types.h"

namespace evrep {

// Global data of an instance. Times in minutes, speeds in km/h, distances in
// km, battery as a fraction of a full charge.
struct Parameters {
  Minutes duty_time = 300;
  double ev_speed = 25;
  double bike_speed = 15;
  Minutes park_and_unfold = 1; // EV parked, bike taken out of the trunk
  Minutes load_bike = 1;       // bike loaded, EV leaves the parking lot
  Km full_range = 150;
  Minutes full_recharge_time = 240;
  int worker_count = 1;
  Euros worker_cost = 60;

  bool operator==(const Parameters&) const = default;
};

std::vector<std::string> check_parameters(const Parameters& parameters);

enum class RequestKind { Pickup, Delivery };

const char* to_string(RequestKind kind);
RequestKind request_kind_from_string(const std::string& name);

struct Request {
  RequestId id = 0;
  RequestKind kind = RequestKind::Pickup;
  LocationIndex location = 1;
  Minutes tw_min = 0;
  Minutes tw_max = 0;
  // Pickup: charge at tw_min. Delivery: charge required at tw_max.
  Fraction battery = 0;
  Euros revenue = 0;
  // User rent time behind the variable revenue component (0 when unused).
  Minutes rent_minutes = 0;

  bool is_pickup() const {
    return kind == RequestKind::Pickup;
  }
  bool is_delivery() const {
    return kind == RequestKind::Delivery;
  }

  bool operator==(const Request&) const = default;
};

struct FlatRevenue {
  Euros amount = 20;
  bool operator==(const FlatRevenue&) const = default;
};

// Variable component proportional to the user rent time plus a fixed one.
struct VrcFrcRevenue {
  double rate_per_min = 0.29;
  Minutes rent_min = 5;
  Minutes rent_max = 15;
  Euros frc = 15;
  bool operator==(const VrcFrcRevenue&) const = default;
};

using RevenueModel = std::variant<FlatRevenue, VrcFrcRevenue>;

struct Provenance {
  std::string generator;
  std::uint64_t seed = 0;
  std::string config_hash;
  bool operator==(const Provenance&) const = default;
};

enum class TravelMode { Bike, EV };

class InvalidInstanceError : public Error {
public:
  explicit InvalidInstanceError(std::vector<std::string> violations);

  const std::vector<std::string>& violations() const {
    return _violations;
  }

private:
  std::vector<std::string> _violations;
};

// Immutable problem data. Location 0 is the depot, request at position i
// (input order) lives at location i + 1.
class Instance {
public:
  // Throws InvalidInstanceError listing every violated invariant.
  Instance(Parameters parameters,
           std::vector<Request> requests,
           std::vector<std::vector<Km>> distances,
           RevenueModel revenue_model = FlatRevenue{},
           Provenance provenance = {});

  // Same checks as the constructor, without throwing.
  static std::vector<std::string>
  violations(const Parameters& parameters,
             const std::vector<Request>& requests,
             const std::vector<std::vector<Km>>& distances);

  const Parameters& parameters() const {
    return _parameters;
  }
  const std::vector<Request>& requests() const {
    return _requests;
  }
  std::size_t size() const {
    return _requests.size();
  }
  std::size_t location_count() const {
    return _requests.size() + 1;
  }
  const RevenueModel& revenue_model() const {
    return _revenue_model;
  }
  const Provenance& provenance() const {
    return _provenance;
  }

  bool contains(RequestId id) const;
  std::size_t position(RequestId id) const;
  const Request& request(RequestId id) const;

  // Unchecked accessors used in hot loops.
  Km distance(LocationIndex from, LocationIndex to) const {
    return _distances[from * location_count() + to];
  }
  Minutes bike_time(LocationIndex from, LocationIndex to) const {
    return _bike_times[from * location_count() + to];
  }
  Minutes ev_time(LocationIndex from, LocationIndex to) const {
    return _ev_times[from * location_count() + to];
  }

  std::vector<std::vector<Km>> distance_matrix() const;

  Instance with_parameters(const Parameters& parameters) const;
  Instance with_requests(std::vector<Request> requests) const;
  // Re-prices every request as vrc + frc. Requires a VrcFrc revenue model.
  Instance with_frc(Euros frc) const;

  bool operator==(const Instance& other) const;

private:
  Parameters _parameters;
  std::vector<Request> _requests;
  std::vector<Km> _distances;
  std::vector<Minutes> _bike_times;
  std::vector<Minutes> _ev_times;
  RevenueModel _revenue_model;
  Provenance _provenance;
  std::unordered_map<RequestId, std::size_t> _index;
};

Minutes travel_time(const Instance& instance,
                    LocationIndex from,
                    LocationIndex to,
                    TravelMode mode);

struct ScheduledVisit {
  RequestId request = 0;
  RequestKind kind = RequestKind::Pickup;
  Minutes arrival = 0;
  Minutes waiting = 0;
  // Charge of the EV when the pickup service starts.
  std::optional<Fraction> battery_at_pickup;
  // Request data the schedule was computed against.
  Minutes tw_min = 0;
  Minutes tw_max = 0;
  Fraction battery_demand = 0;

  Minutes service_start() const {
    return arrival + waiting;
  }

  bool operator==(const ScheduledVisit&) const = default;
};

struct RouteSchedule {
  int worker = 0;
  Minutes start_time = 0;
  std::vector<ScheduledVisit> visits;
  Minutes end_time = 0;

  std::size_t pair_count() const {
    return visits.size() / 2;
  }
  Minutes duration() const {
    return end_time - start_time;
  }
  bool empty() const {
    return visits.empty();
  }

  bool operator==(const RouteSchedule&) const = default;
};

struct Solution {
  std::vector<RouteSchedule> routes;
  std::vector<RequestId> served;
  std::vector<RequestId> rejected;
  Euros total_revenue = 0;
  Euros worker_cost = 0;
  Euros profit = 0;

  bool operator==(const Solution&) const = default;
};

// Builds the served/rejected sets and the objective accounting for a set of
// routes. Workers are renumbered 0..n-1 in route order.
Solution make_solution(const Instance& instance,
                       std::vector<RouteSchedule> routes);

// Sum of served revenues minus C per route. Throws AccountingMismatch when
// the stored profit disagrees with the recomputed one.
Euros evaluate_profit(const Solution& solution, const Instance& instance);

std::size_t count_served(const Solution& solution);

double objective_value(const Solution& solution, Objective objective);

// Strict order used by every solver: objective first, then fewer routes.
bool better_solution(const Solution& a,
                     const Solution& b,
                     Objective objective);

} // namespace evrep
