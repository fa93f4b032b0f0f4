#include "evrep/exact.h"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <limits>
#include <vector>

namespace evrep {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// A time of the form max(x + shift, floor), x being the depot departure.
struct Lagged {
  Minutes shift = 0;
  Minutes floor = -kInf;

  Lagged plus(Minutes d) const {
    return {shift + d, floor + d};
  }
  Lagged at_least(Minutes t) const {
    return {shift, std::max(floor, t)};
  }
};

struct Interval {
  Minutes lo = -kInf;
  Minutes hi = kInf;
  bool ok = true;

  // time(x) <= bound
  void upper(const Lagged& time, Minutes bound) {
    if (time.floor > bound + kTimeEps) {
      ok = false;
    }
    hi = std::min(hi, bound - time.shift);
  }
  // time(x) + extra - x <= limit
  void duty(const Lagged& time, Minutes extra, Minutes limit) {
    if (time.shift + extra > limit + kTimeEps) {
      ok = false;
    }
    lo = std::max(lo, time.floor + extra - limit);
  }
  // time(x) >= bound
  void lower(const Lagged& time, Minutes bound) {
    if (time.floor < bound) {
      lo = std::max(lo, bound - time.shift);
    }
  }
};

} // namespace

std::optional<DepartureInterval>
feasible_departures(const Instance& instance,
                    std::span<const RequestId> sequence) {
  if (sequence.empty() || sequence.size() % 2 != 0) {
    return std::nullopt;
  }
  const auto& prm = instance.parameters();
  const Minutes q_park = prm.park_and_unfold;
  const Minutes q_load = prm.load_bike;
  const Minutes T = prm.duty_time;
  const Minutes G = prm.full_recharge_time;

  Interval range;
  Lagged time; // departure from the previous stop
  LocationIndex location = kDepot;
  const Request* pickup = nullptr;
  Lagged pickup_service;

  for (std::size_t i = 0; i < sequence.size(); ++i) {
    const auto& r = instance.request(sequence[i]);
    if (r.is_pickup() != (i % 2 == 0)) {
      return std::nullopt;
    }
    if (r.is_pickup()) {
      const auto& next = instance.request(sequence[i + 1]);
      const Lagged arrival = time.plus(instance.bike_time(location, r.location));
      range.upper(arrival, r.tw_max);
      const Lagged service = arrival.at_least(r.tw_min);
      range.duty(service,
                 q_load + instance.ev_time(r.location, next.location) +
                   instance.bike_time(next.location, kDepot) + q_park,
                 T);
      pickup = &r;
      pickup_service = service;
      time = service.plus(q_load);
    } else {
      const Lagged arrival = time.plus(instance.ev_time(location, r.location));
      range.upper(arrival, r.tw_max);
      const Lagged service = arrival.at_least(r.tw_min - q_park);
      range.duty(service, q_park + instance.bike_time(r.location, kDepot), T);

      const Fraction used =
        instance.distance(pickup->location, r.location) / prm.full_range;
      if (used > 1 + kBatteryEps) {
        return std::nullopt;
      }
      // Enough charge for the leg once the pickup service starts.
      range.lower(pickup_service,
                  pickup->tw_min + (used - pickup->battery) * G);
      // Charge target: flat in the pickup start until the battery saturates,
      // then decreasing.
      const Minutes lag =
        q_load + instance.ev_time(pickup->location, r.location);
      const Fraction unsaturated =
        pickup->battery - used + (r.tw_max - lag - pickup->tw_min) / G;
      if (unsaturated < r.battery - kBatteryEps) {
        return std::nullopt;
      }
      range.upper(pickup_service,
                  r.tw_max - lag + (1 - used - r.battery) * G);
      time = service.plus(q_park);
    }
    location = r.location;
  }
  range.duty(time, instance.bike_time(location, kDepot), T);

  if (!range.ok || range.lo > range.hi + kTimeEps) {
    return std::nullopt;
  }
  return DepartureInterval{range.lo, std::max(range.lo, range.hi)};
}

std::optional<RouteSchedule> schedule_sequence(const Instance& instance,
                                               std::span<const RequestId> sequence,
                                               int worker) {
  const auto range = feasible_departures(instance, sequence);
  if (!range) {
    return std::nullopt;
  }
  const auto& first = instance.request(sequence[0]);
  const Minutes preferred =
    first.tw_min - instance.bike_time(kDepot, first.location);
  const Minutes start =
    std::max(range->earliest, std::min(range->latest, preferred));
  auto route = schedule_route(instance, start, sequence, worker);
  if (!validate_route(route, instance).ok()) {
    return std::nullopt;
  }
  return route;
}

namespace {

class Search {
public:
  Search(const Instance& instance, Objective objective, const OracleLimits& limits)
    : _instance(instance),
      _objective(objective),
      _limits(limits),
      _n(instance.size()),
      _routes(std::size_t{1} << _n),
      _began(std::chrono::steady_clock::now()) {
  }

  ExactResult run() {
    std::vector<RequestId> sequence;
    enumerate_routes(sequence, 0);
    collect_masks();
    std::vector<std::uint32_t> chosen;
    partition(0, 0, 0, chosen);

    std::vector<RouteSchedule> routes;
    for (std::uint32_t mask : _best.masks) {
      routes.push_back(*_routes[mask]);
    }
    ExactResult result;
    result.solution = make_solution(_instance, std::move(routes));
    result.optimal = !_stopped;
    result.nodes = _nodes;
    return result;
  }

private:
  struct Incumbent {
    double value = 0;
    std::vector<std::uint32_t> masks;
    std::vector<RequestId> served;
  };

  bool tick() {
    if (_stopped) {
      return false;
    }
    ++_nodes;
    if (_limits.max_nodes != 0 && _nodes >= _limits.max_nodes) {
      _stopped = true;
    } else if (_limits.time_budget_seconds > 0 && _nodes % 256 == 0) {
      const std::chrono::duration<double> elapsed =
        std::chrono::steady_clock::now() - _began;
      _stopped = elapsed.count() > _limits.time_budget_seconds;
    }
    return !_stopped;
  }

  // Feasibility is prefix-closed, so extending only feasible sequences
  // reaches every feasible route.
  void enumerate_routes(std::vector<RequestId>& sequence, std::uint32_t mask) {
    const auto& requests = _instance.requests();
    for (std::size_t p = 0; p < _n; ++p) {
      if ((mask >> p & 1) || !requests[p].is_pickup()) {
        continue;
      }
      for (std::size_t d = 0; d < _n; ++d) {
        if ((mask >> d & 1) || !requests[d].is_delivery()) {
          continue;
        }
        if (!tick()) {
          return;
        }
        sequence.push_back(requests[p].id);
        sequence.push_back(requests[d].id);
        if (feasible_departures(_instance, sequence)) {
          const std::uint32_t next = mask | (1u << p) | (1u << d);
          if (!_routes[next]) {
            _routes[next] = schedule_sequence(_instance, sequence);
          }
          enumerate_routes(sequence, next);
        }
        sequence.pop_back();
        sequence.pop_back();
      }
    }
  }

  double gain(std::size_t pos) const {
    return _objective == Objective::Profit
             ? _instance.requests()[pos].revenue
             : 1.0;
  }

  void collect_masks() {
    _by_lowest.assign(_n, {});
    _value.assign(_routes.size(), 0);
    const Euros cost = _instance.parameters().worker_cost;
    for (std::uint32_t mask = 1; mask < _routes.size(); ++mask) {
      if (!_routes[mask]) {
        continue;
      }
      double value = 0;
      for (std::size_t i = 0; i < _n; ++i) {
        if (mask >> i & 1) {
          value += gain(i);
        }
      }
      if (_objective == Objective::Profit) {
        value -= cost;
        // A route that does not earn money is never part of a best solution.
        if (value <= 1e-9) {
          continue;
        }
      }
      _value[mask] = value;
      _by_lowest[static_cast<std::size_t>(std::countr_zero(mask))].push_back(mask);
    }
  }

  void consider(double value, const std::vector<std::uint32_t>& masks) {
    std::vector<RequestId> served;
    std::uint32_t used = 0;
    for (std::uint32_t mask : masks) {
      used |= mask;
    }
    for (std::size_t i = 0; i < _n; ++i) {
      if (used >> i & 1) {
        served.push_back(_instance.requests()[i].id);
      }
    }
    std::sort(served.begin(), served.end());

    bool better = value > _best.value + 1e-9;
    if (!better && value >= _best.value - 1e-9) {
      better = masks.size() < _best.masks.size() ||
               (masks.size() == _best.masks.size() && served < _best.served);
    }
    if (better) {
      _best = {value, masks, std::move(served)};
    }
  }

  // Request i is either left unserved or covered by a route whose lowest
  // request is i.
  void partition(std::size_t i,
                 std::uint32_t used,
                 double value,
                 std::vector<std::uint32_t>& chosen) {
    if (!tick()) {
      return;
    }
    const auto workers =
      static_cast<std::size_t>(_instance.parameters().worker_count);
    if (i == _n || chosen.size() == workers) {
      consider(value, chosen);
      return;
    }
    double bound = value;
    for (std::size_t j = i; j < _n; ++j) {
      if (!(used >> j & 1)) {
        bound += std::max(0.0, gain(j));
      }
    }
    if (bound < _best.value - 1e-9) {
      return;
    }
    if (used >> i & 1) {
      partition(i + 1, used, value, chosen);
      return;
    }
    for (std::uint32_t mask : _by_lowest[i]) {
      if (mask & used) {
        continue;
      }
      chosen.push_back(mask);
      partition(i + 1, used | mask, value + _value[mask], chosen);
      chosen.pop_back();
    }
    partition(i + 1, used, value, chosen);
  }

  const Instance& _instance;
  Objective _objective;
  OracleLimits _limits;
  std::size_t _n;
  std::vector<std::optional<RouteSchedule>> _routes;
  std::vector<std::vector<std::uint32_t>> _by_lowest;
  std::vector<double> _value;
  Incumbent _best;
  std::uint64_t _nodes = 0;
  bool _stopped = false;
  std::chrono::steady_clock::time_point _began;
};

} // namespace

ExactResult solve_exact(const Instance& instance,
                        Objective objective,
                        const OracleLimits& limits) {
  if (instance.size() > limits.max_requests || instance.size() > 24) {
    throw Error(ErrorKind::InstanceTooLarge,
                std::to_string(instance.size()) +
                  " requests exceed the exact solver limit of " +
                  std::to_string(std::min<std::size_t>(limits.max_requests, 24)));
  }
  return Search(instance, objective, limits).run();
}

std::optional<double> optimality_gap(double heuristic, double reference) {
  if (std::abs(reference) < 1e-12) {
    if (std::abs(heuristic) < 1e-12) {
      return 0.0;
    }
    return std::nullopt;
  }
  return (reference - heuristic) / reference * 100.0;
}

std::optional<double> optimality_gap(const Solution& heuristic,
                                     const Solution& reference,
                                     Objective objective) {
  return optimality_gap(objective_value(heuristic, objective),
                        objective_value(reference, objective));
}

} // namespace evrep
