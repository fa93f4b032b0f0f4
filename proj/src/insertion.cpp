#include "evrep/insertion.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

namespace evrep {

bool pair_necessary_feasible(const Request& pickup,
                             const Request& delivery,
                             const Instance& instance) {
  if (!pickup.is_pickup() || !delivery.is_delivery()) {
    return false;
  }
  const auto& prm = instance.parameters();
  const Minutes drive = instance.ev_time(pickup.location, delivery.location);
  if (pickup.tw_min + drive + prm.load_bike + prm.park_and_unfold >
      delivery.tw_max + kTimeEps) {
    return false;
  }
  const Fraction consumed =
    instance.distance(pickup.location, delivery.location) / prm.full_range;
  if (pickup.battery - consumed +
        (delivery.tw_max - delivery.tw_min) / prm.full_recharge_time <
      delivery.battery - kBatteryEps) {
    return false;
  }
  const Minutes duty = instance.bike_time(kDepot, pickup.location) +
                       instance.bike_time(delivery.location, kDepot) +
                       std::max(drive + prm.load_bike,
                                delivery.tw_min - pickup.tw_max) +
                       prm.park_and_unfold;
  return duty <= prm.duty_time + kTimeEps;
}

CompatibilityTable::CompatibilityTable(const Instance& instance)
  : _n(instance.size()), _table(_n * _n, false) {
  const auto& requests = instance.requests();
  for (std::size_t i = 0; i < _n; ++i) {
    if (!requests[i].is_pickup()) {
      continue;
    }
    for (std::size_t j = 0; j < _n; ++j) {
      _table[i * _n + j] =
        pair_necessary_feasible(requests[i], requests[j], instance);
    }
  }
}

Minutes critical_factor(const Instance& instance,
                        const Request& request,
                        std::span<const RequestId> compatible_opposite) {
  if (compatible_opposite.empty()) {
    return kUncoupled;
  }
  if (request.is_pickup()) {
    Minutes latest = -std::numeric_limits<double>::infinity();
    for (RequestId id : compatible_opposite) {
      const auto& d = instance.request(id);
      latest =
        std::max(latest, d.tw_max - instance.ev_time(request.location, d.location));
    }
    return latest - request.tw_min;
  }
  Minutes earliest = std::numeric_limits<double>::infinity();
  for (RequestId id : compatible_opposite) {
    const auto& p = instance.request(id);
    earliest =
      std::min(earliest, p.tw_min + instance.ev_time(p.location, request.location));
  }
  return request.tw_max - earliest;
}

namespace {

bool compatible(const CompatibilityTable& table,
                const Instance& instance,
                std::size_t a,
                std::size_t b) {
  const auto& ra = instance.requests()[a];
  return ra.is_pickup() ? table.compatible(a, b) : table.compatible(b, a);
}

// CF of the request at `pos` against the open requests of the other kind.
Minutes critical_factor_at(const Instance& instance,
                           const CompatibilityTable& table,
                           const std::vector<char>& open,
                           std::size_t pos) {
  std::vector<RequestId> opposite;
  const auto& requests = instance.requests();
  for (std::size_t j = 0; j < requests.size(); ++j) {
    if (open[j] && requests[j].kind != requests[pos].kind &&
        compatible(table, instance, pos, j)) {
      opposite.push_back(requests[j].id);
    }
  }
  return critical_factor(instance, requests[pos], opposite);
}

struct Criticality {
  Minutes cf;
  RequestId id;
  std::size_t pos;
  bool operator<(const Criticality& o) const {
    return cf < o.cf || (cf == o.cf && id < o.id);
  }
};

} // namespace

PreprocessResult preprocess(const Instance& instance) {
  const CompatibilityTable table(instance);
  const auto& requests = instance.requests();
  const std::size_t n = requests.size();
  std::vector<char> open(n, 1);

  PreprocessResult out;
  std::vector<Minutes> cf(n);
  for (std::size_t i = 0; i < n; ++i) {
    cf[i] = critical_factor_at(instance, table, open, i);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (cf[i] < 0) {
      open[i] = 0;
      out.rejected.push_back(requests[i].id);
    }
  }

  std::vector<Criticality> pickups;
  std::vector<Criticality> deliveries;
  for (std::size_t i = 0; i < n; ++i) {
    if (!open[i]) {
      continue;
    }
    Criticality c{critical_factor_at(instance, table, open, i),
                  requests[i].id,
                  i};
    (requests[i].is_pickup() ? pickups : deliveries).push_back(c);
  }
  auto& larger = pickups.size() > deliveries.size() ? pickups : deliveries;
  const std::size_t surplus = std::max(pickups.size(), deliveries.size()) -
                              std::min(pickups.size(), deliveries.size());
  std::sort(larger.begin(), larger.end());
  for (std::size_t k = 0; k < surplus; ++k) {
    open[larger[k].pos] = 0;
    out.rejected.push_back(larger[k].id);
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (open[i]) {
      out.retained.push_back(requests[i].id);
    }
  }
  std::sort(out.rejected.begin(), out.rejected.end());
  return out;
}

FirstPairTiming init_first_pair(const Request& pickup,
                                const Request& delivery,
                                const Instance& instance) {
  const auto& prm = instance.parameters();
  const Minutes handling = prm.park_and_unfold + prm.load_bike;
  const Minutes drive = instance.ev_time(pickup.location, delivery.location);

  FirstPairTiming t;
  t.mu = std::max(delivery.tw_min, pickup.tw_min + drive + handling);
  t.pickup_arrival = std::min(pickup.tw_max, t.mu - drive - handling);
  t.pickup_wait = 0;
  t.delivery_arrival = t.pickup_arrival + drive + handling;
  t.delivery_wait = t.mu - t.delivery_arrival;
  t.start_time =
    t.pickup_arrival - instance.bike_time(kDepot, pickup.location);
  return t;
}

InsertionPlan plan_insertion(const Instance& instance,
                             const RouteSchedule& route,
                             std::size_t gap,
                             const Request& pickup,
                             const Request& delivery) {
  if (!pickup.is_pickup() || !delivery.is_delivery()) {
    throw Error(ErrorKind::WrongKind, "insertion needs a (pickup, delivery) pair");
  }
  const std::size_t n = route.pair_count();
  if (gap > n) {
    throw Error(ErrorKind::GapOutOfRange,
                "gap " + std::to_string(gap) + " on a route with " +
                  std::to_string(n) + " pairs");
  }

  const auto& prm = instance.parameters();
  const Minutes q_park = prm.park_and_unfold;
  const Minutes q_load = prm.load_bike;
  const auto& v = route.visits;

  InsertionPlan plan;
  plan.gap = gap;

  if (route.empty()) {
    const auto timing = init_first_pair(pickup, delivery, instance);
    const RequestId sequence[] = {pickup.id, delivery.id};
    const auto fresh = schedule_route(instance, timing.start_time, sequence);
    plan.start_time = timing.start_time;
    plan.pickup_arrival = fresh.visits[0].arrival;
    plan.pickup_wait = fresh.visits[0].waiting;
    plan.delivery_arrival = fresh.visits[1].arrival;
    plan.delivery_wait = fresh.visits[1].waiting;
    plan.time_extension = fresh.duration();
    plan.feasible = validate_route(fresh, instance).ok();
    return plan;
  }

  const Minutes drive = instance.ev_time(pickup.location, delivery.location);
  const Minutes old_start = route.start_time;
  Minutes start = old_start;
  Minutes a_p = 0;
  if (gap == 0) {
    // New first pickup: reached without waiting, as late as the old first
    // pickup allows.
    const auto& first = instance.request(v[0].request);
    const Minutes latest_departure =
      v[0].arrival - instance.bike_time(delivery.location, first.location);
    const Minutes target =
      std::max(latest_departure, delivery.tw_min) - q_park - q_load - drive;
    const Minutes chosen =
      std::max(pickup.tw_min, std::min(pickup.tw_max, target));
    start = chosen - instance.bike_time(kDepot, pickup.location);
    a_p = start + instance.bike_time(kDepot, pickup.location);
  } else {
    const auto& prev = v[2 * gap - 1];
    const auto& prev_request = instance.request(prev.request);
    a_p = prev.arrival + prev.waiting + q_park +
          instance.bike_time(prev_request.location, pickup.location);
  }
  const Minutes w_p = waiting_time(pickup, a_p, q_park);
  const Minutes s_p = a_p + w_p;
  const Minutes a_d = s_p + q_load + drive;
  const Minutes w_d = waiting_time(delivery, a_d, q_park);
  const Minutes leave_d = a_d + w_d + q_park;

  Minutes old_anchor = route.end_time;
  LocationIndex anchor_location = kDepot;
  if (gap < n) {
    old_anchor = v[2 * gap].arrival;
    anchor_location = instance.request(v[2 * gap].request).location;
  }
  const Minutes shift =
    leave_d + instance.bike_time(delivery.location, anchor_location) - old_anchor;

  Minutes downstream_wait = 0;
  for (std::size_t k = 2 * gap; k < v.size(); ++k) {
    downstream_wait += v[k].waiting;
  }
  const Minutes end_shift =
    gap == n ? shift : std::max(0.0, shift - downstream_wait);

  plan.start_time = start;
  plan.pickup_arrival = a_p;
  plan.pickup_wait = w_p;
  plan.delivery_arrival = a_d;
  plan.delivery_wait = w_d;
  plan.shift = shift;
  plan.time_extension = end_shift + (old_start - start);

  // Reaching p and d within their windows, battery on the new leg.
  if (a_p > pickup.tw_max + kTimeEps || a_d > delivery.tw_max + kTimeEps) {
    return plan;
  }
  const Fraction after_leg =
    charge_at_pickup(instance, pickup, s_p) -
    instance.distance(pickup.location, delivery.location) / prm.full_range;
  if (after_leg < -kBatteryEps ||
      after_leg + (delivery.tw_max - a_d) / prm.full_recharge_time <
        delivery.battery - kBatteryEps) {
    return plan;
  }
  if (leave_d + instance.bike_time(delivery.location, kDepot) - start >
      prm.duty_time + kTimeEps) {
    return plan;
  }

  if (gap < n) {
    // Downstream visits may only be postponed.
    if (shift < -1e-9) {
      return plan;
    }
    // Postponement budget: max delay each visit tolerates, plus the waiting
    // accumulated before it that absorbs the shift.
    Minutes budget = std::numeric_limits<double>::infinity();
    Minutes waited = 0;
    for (std::size_t k = 2 * gap; k < v.size(); ++k) {
      const Minutes postponement = v[k].tw_max - v[k].arrival - v[k].waiting;
      waited += v[k].waiting;
      budget = std::min(budget, postponement + waited);
    }
    if (shift > budget + kTimeEps) {
      return plan;
    }
  }

  if (route.end_time + end_shift - start > prm.duty_time + kTimeEps) {
    return plan;
  }

  // Postponed deliveries must still allow a timely return and reach their
  // charge target, which can fail once the carried EV is fully charged.
  Minutes delay = std::max(shift, 0.0);
  const Request* carried = nullptr;
  Minutes carried_service = 0;
  for (std::size_t k = 2 * gap; k < v.size(); ++k) {
    const auto& r = instance.request(v[k].request);
    const Minutes arrival = v[k].arrival + delay;
    const Minutes service = arrival + std::max(0.0, v[k].waiting - delay);
    if (r.is_pickup()) {
      carried = &r;
      carried_service = service;
    } else {
      if (service + q_park + instance.bike_time(r.location, kDepot) - start >
          prm.duty_time + kTimeEps) {
        return plan;
      }
      const Fraction charge =
        charge_at_pickup(instance, *carried, carried_service) -
        instance.distance(carried->location, r.location) / prm.full_range;
      if (charge < -kBatteryEps ||
          charge + (r.tw_max - arrival) / prm.full_recharge_time <
            r.battery - kBatteryEps) {
        return plan;
      }
    }
    delay = std::max(0.0, delay - v[k].waiting);
  }

  plan.feasible = true;
  return plan;
}

Minutes time_extension(const Instance& instance,
                       const RouteSchedule& route,
                       std::size_t gap,
                       const Request& pickup,
                       const Request& delivery) {
  return plan_insertion(instance, route, gap, pickup, delivery).time_extension;
}

bool insertion_feasible(const Instance& instance,
                        const RouteSchedule& route,
                        std::size_t gap,
                        const Request& pickup,
                        const Request& delivery) {
  return plan_insertion(instance, route, gap, pickup, delivery).feasible;
}

RouteSchedule apply_insertion(const Instance& instance,
                              const RouteSchedule& route,
                              const InsertionPlan& plan,
                              const Request& pickup,
                              const Request& delivery) {
  auto sequence = route_sequence(route);
  const auto at = sequence.begin() + static_cast<std::ptrdiff_t>(2 * plan.gap);
  sequence.insert(at, {pickup.id, delivery.id});
  return schedule_route(instance, plan.start_time, sequence, route.worker);
}

std::optional<InsertionPlan> best_insertion(const Instance& instance,
                                            const RouteSchedule& route,
                                            const Request& pickup,
                                            const Request& delivery) {
  std::optional<InsertionPlan> best;
  for (std::size_t gap = 0; gap <= route.pair_count(); ++gap) {
    auto plan = plan_insertion(instance, route, gap, pickup, delivery);
    if (plan.feasible &&
        (!best || plan.time_extension < best->time_extension - 1e-9)) {
      best = plan;
    }
  }
  return best;
}

std::vector<RouteSchedule> drop_loss_routes(const Instance& instance,
                                            std::vector<RouteSchedule> routes) {
  const Euros cost = instance.parameters().worker_cost;
  std::erase_if(routes, [&](const RouteSchedule& route) {
    Euros revenue = 0;
    for (const auto& visit : route.visits) {
      revenue += instance.request(visit.request).revenue;
    }
    return revenue < cost - 1e-9;
  });
  return routes;
}

namespace {

// Open requests of the opposite kind passing the necessary pair conditions,
// nearest first by l_pd, lowest id on ties.
std::vector<std::size_t> partners_by_distance(const Instance& instance,
                                              const CompatibilityTable& table,
                                              const std::vector<char>& open,
                                              std::size_t pos) {
  const auto& requests = instance.requests();
  const auto& r = requests[pos];
  std::vector<std::pair<Km, std::size_t>> ranked;
  for (std::size_t j = 0; j < requests.size(); ++j) {
    if (!open[j] || requests[j].kind == r.kind ||
        !compatible(table, instance, pos, j)) {
      continue;
    }
    const Km l = r.is_pickup()
                   ? instance.distance(r.location, requests[j].location)
                   : instance.distance(requests[j].location, r.location);
    ranked.emplace_back(l, j);
  }
  std::sort(ranked.begin(), ranked.end(), [&](const auto& a, const auto& b) {
    return a.first < b.first ||
           (a.first == b.first && requests[a.second].id < requests[b.second].id);
  });
  std::vector<std::size_t> out;
  out.reserve(ranked.size());
  for (const auto& entry : ranked) {
    out.push_back(entry.second);
  }
  return out;
}

// Shared construction phase. `order` arranges the open request positions in
// the sequence they are tried as the next request to couple.
template <class Order>
Solution construct(const Instance& instance,
                   const CompatibilityTable& table,
                   const PreprocessResult& prep,
                   Objective objective,
                   Order&& order) {
  const auto& requests = instance.requests();
  std::vector<char> open(requests.size(), 0);
  for (RequestId id : prep.retained) {
    open[instance.position(id)] = 1;
  }

  std::vector<RouteSchedule> routes;
  const auto workers =
    static_cast<std::size_t>(instance.parameters().worker_count);
  std::vector<std::size_t> candidates;

  while (routes.size() < workers) {
    RouteSchedule route;
    route.worker = static_cast<int>(routes.size());

    while (true) {
      candidates.clear();
      for (std::size_t i = 0; i < requests.size(); ++i) {
        if (open[i]) {
          candidates.push_back(i);
        }
      }
      if (candidates.empty()) {
        break;
      }
      order(candidates, open);

      bool inserted = false;
      for (std::size_t pos : candidates) {
        if (!open[pos]) {
          continue;
        }
        const auto partners = partners_by_distance(instance, table, open, pos);
        if (partners.empty()) {
          // Cannot be coupled with any open request: rejected for good.
          open[pos] = 0;
          continue;
        }
        const bool is_pickup = requests[pos].is_pickup();
        for (std::size_t partner : partners) {
          const auto& p = requests[is_pickup ? pos : partner];
          const auto& d = requests[is_pickup ? partner : pos];
          if (auto plan = best_insertion(instance, route, p, d)) {
            route = apply_insertion(instance, route, *plan, p, d);
            open[instance.position(p.id)] = 0;
            open[instance.position(d.id)] = 0;
            inserted = true;
            break;
          }
        }
        if (inserted) {
          break;
        }
      }
      if (!inserted) {
        break;
      }
    }

    if (route.empty()) {
      break;
    }
    routes.push_back(std::move(route));
  }

  if (objective == Objective::Profit) {
    routes = drop_loss_routes(instance, std::move(routes));
  }
  return make_solution(instance, std::move(routes));
}

std::mt19937_64 iteration_rng(std::uint64_t seed, std::uint64_t iteration) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(iteration),
                    static_cast<std::uint32_t>(iteration >> 32)};
  return std::mt19937_64(seq);
}

} // namespace

Solution run_ch(const Instance& instance, Objective objective) {
  const CompatibilityTable table(instance);
  const auto prep = preprocess(instance);
  return construct(instance,
                   table,
                   prep,
                   objective,
                   [&](std::vector<std::size_t>& candidates,
                       const std::vector<char>& open) {
                     std::vector<Criticality> ranked;
                     ranked.reserve(candidates.size());
                     for (std::size_t pos : candidates) {
                       ranked.push_back(
                         {critical_factor_at(instance, table, open, pos),
                          instance.requests()[pos].id,
                          pos});
                     }
                     std::sort(ranked.begin(), ranked.end());
                     for (std::size_t k = 0; k < ranked.size(); ++k) {
                       candidates[k] = ranked[k].pos;
                     }
                   });
}

namespace {

Solution rh_iteration(const Instance& instance,
                      const CompatibilityTable& table,
                      const PreprocessResult& prep,
                      Objective objective,
                      std::uint64_t seed,
                      std::uint64_t iteration) {
  auto rng = iteration_rng(seed, iteration);
  return construct(instance,
                   table,
                   prep,
                   objective,
                   [&](std::vector<std::size_t>& candidates,
                       const std::vector<char>&) {
                     std::shuffle(candidates.begin(), candidates.end(), rng);
                   });
}

} // namespace

Solution run_rh_iteration(const Instance& instance,
                          const PreprocessResult& prep,
                          Objective objective,
                          std::uint64_t seed,
                          std::uint64_t iteration) {
  const CompatibilityTable table(instance);
  return rh_iteration(instance, table, prep, objective, seed, iteration);
}

Solution run_rh(const Instance& instance, const RhConfig& config) {
  if (config.iterations < 1) {
    throw Error(ErrorKind::DegenerateConfig, "RH needs at least one iteration");
  }
  const CompatibilityTable table(instance);
  const auto prep = preprocess(instance);
  const auto iterations = static_cast<std::uint64_t>(config.iterations);
  const auto threads = static_cast<std::uint64_t>(
    std::clamp<int>(config.threads, 1, config.iterations));

  struct Best {
    std::optional<Solution> solution;
    std::uint64_t iteration = 0;
  };
  std::vector<Best> partial(threads);

  auto worker = [&](std::uint64_t slot) {
    Best& best = partial[slot];
    for (std::uint64_t i = slot; i < iterations; i += threads) {
      auto candidate =
        rh_iteration(instance, table, prep, config.objective, config.seed, i);
      if (!best.solution ||
          better_solution(candidate, *best.solution, config.objective)) {
        best.solution = std::move(candidate);
        best.iteration = i;
      }
    }
  };

  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::jthread> pool;
    for (std::uint64_t t = 0; t < threads; ++t) {
      pool.emplace_back(worker, t);
    }
  }

  // Lower iteration index wins ties, independent of the thread split.
  Best* winner = nullptr;
  for (auto& best : partial) {
    if (!best.solution) {
      continue;
    }
    if (winner == nullptr ||
        better_solution(*best.solution, *winner->solution, config.objective) ||
        (!better_solution(*winner->solution, *best.solution, config.objective) &&
         best.iteration < winner->iteration)) {
      winner = &best;
    }
  }
  return std::move(*winner->solution);
}

} // namespace evrep
