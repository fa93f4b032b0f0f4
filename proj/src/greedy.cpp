#include "evrep/greedy.h"

#include <algorithm>
#include <set>
#include <vector>

#include "evrep/insertion.h"

namespace evrep {

const char* to_string(GreedyPolicy policy) {
  return policy == GreedyPolicy::NearestNeighborhood ? "nnh" : "muh";
}

std::optional<RequestId>
select_next(const Instance& instance,
            const ScheduleState& state,
            std::span<const RequestId> candidates,
            std::span<const RequestId> unserved_deliveries,
            GreedyPolicy policy,
            const FeasibilityOptions& options) {
  std::optional<RequestId> best;
  double best_key = 0;
  std::vector<RequestId> compatible;

  for (RequestId id : candidates) {
    const auto& r = instance.request(id);
    bool feasible = false;
    if (r.is_pickup()) {
      compatible.clear();
      for (RequestId d : unserved_deliveries) {
        if (pair_necessary_feasible(r, instance.request(d), instance)) {
          compatible.push_back(d);
        }
      }
      feasible = pickup_feasible(instance, state, r, compatible, options);
    } else {
      feasible = delivery_feasible(instance, state, r);
    }
    if (!feasible) {
      continue;
    }
    const double key = policy == GreedyPolicy::NearestNeighborhood
                         ? instance.distance(state.location, r.location)
                         : r.tw_max;
    if (!best || key < best_key || (key == best_key && id < *best)) {
      best = id;
      best_key = key;
    }
  }
  return best;
}

Solution run_greedy(const Instance& instance,
                    GreedyPolicy policy,
                    const GreedyOptions& options) {
  std::set<RequestId> unserved;
  for (const auto& r : instance.requests()) {
    unserved.insert(r.id);
  }

  std::vector<RouteSchedule> routes;
  const auto workers =
    static_cast<std::size_t>(instance.parameters().worker_count);

  while (routes.size() < workers && !unserved.empty()) {
    ScheduleState state;
    std::vector<RequestId> sequence;
    std::set<RequestId> excluded;

    while (true) {
      std::vector<RequestId> pickups;
      std::vector<RequestId> deliveries;
      for (RequestId id : unserved) {
        if (instance.request(id).is_pickup()) {
          if (!excluded.contains(id)) {
            pickups.push_back(id);
          }
        } else {
          deliveries.push_back(id);
        }
      }
      if (pickups.empty() || deliveries.empty()) {
        break;
      }

      const auto pickup = select_next(instance,
                                      state,
                                      pickups,
                                      deliveries,
                                      policy,
                                      options.feasibility);
      if (!pickup) {
        break;
      }
      // The pickup bound must also hold for the delivery actually chosen.
      std::vector<RequestId> followers;
      for (RequestId d : deliveries) {
        const RequestId one[] = {d};
        if (pickup_feasible(instance,
                            state,
                            instance.request(*pickup),
                            one,
                            options.feasibility)) {
          followers.push_back(d);
        }
      }
      ScheduleState trial = state;
      append_visit(instance, trial, instance.request(*pickup));
      const auto delivery = select_next(instance,
                                        trial,
                                        followers,
                                        {},
                                        policy,
                                        options.feasibility);
      if (!delivery) {
        // No delivery can follow this pickup on the current route.
        excluded.insert(*pickup);
        continue;
      }
      append_visit(instance, trial, instance.request(*delivery));
      state = trial;
      sequence.push_back(*pickup);
      sequence.push_back(*delivery);
      unserved.erase(*pickup);
      unserved.erase(*delivery);
    }

    if (sequence.empty()) {
      break;
    }
    routes.push_back(schedule_route(instance,
                                    state.start_time,
                                    sequence,
                                    static_cast<int>(routes.size())));
  }

  if (options.objective == Objective::Profit && options.drop_loss_routes) {
    routes = drop_loss_routes(instance, std::move(routes));
  }
  return make_solution(instance, std::move(routes));
}

} // namespace evrep
