#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "evrep/feasibility.h"
#include "evrep/model.h"

namespace evrep {

// Necessary conditions for serving p and then d back to back: the delivery
// window is reachable from the pickup window opening, the battery target is
// reachable, and the pair fits a single duty.
bool pair_necessary_feasible(const Request& pickup,
                             const Request& delivery,
                             const Instance& instance);

// pair_necessary_feasible for every (pickup, delivery) pair of an instance,
// indexed by request position.
class CompatibilityTable {
public:
  explicit CompatibilityTable(const Instance& instance);

  bool compatible(std::size_t pickup_pos, std::size_t delivery_pos) const {
    return _table[pickup_pos * _n + delivery_pos];
  }

private:
  std::size_t _n;
  std::vector<bool> _table;
};

inline constexpr Minutes kUncoupled = -std::numeric_limits<double>::infinity();

// Urgency of a request against the unserved requests of the opposite kind
// that are compatible with it. Lower is more urgent; kUncoupled when the
// opposite set is empty.
Minutes critical_factor(const Instance& instance,
                        const Request& request,
                        std::span<const RequestId> compatible_opposite);

struct PreprocessResult {
  std::vector<RequestId> retained;
  std::vector<RequestId> rejected;
};

// Drops requests without any compatible partner, then removes the most
// critical requests of the larger side until both sides have equal size.
PreprocessResult preprocess(const Instance& instance);

// Timing of the first pair of an empty route: the pickup is reached as late
// as possible so that neither request waits. delivery_arrival is counted
// after parking (it includes q'); route records store the arrival before
// parking, which is delivery_arrival - q'.
struct FirstPairTiming {
  Minutes mu = 0;
  Minutes pickup_arrival = 0;
  Minutes pickup_wait = 0;
  Minutes delivery_arrival = 0;
  Minutes delivery_wait = 0;
  Minutes start_time = 0;
};

FirstPairTiming init_first_pair(const Request& pickup,
                                const Request& delivery,
                                const Instance& instance);

// Outcome of inserting (p, d) into a route at a gap. Gap i places the pair
// between the delivery of pair i-1 and the pickup of pair i; gap 0 is right
// after the depot, gap n right before the return.
struct InsertionPlan {
  std::size_t gap = 0;
  Minutes start_time = 0;
  Minutes pickup_arrival = 0;
  Minutes pickup_wait = 0;
  Minutes delivery_arrival = 0;
  Minutes delivery_wait = 0;
  // Shift of the arrival at the visit (or depot return) following the pair.
  Minutes shift = 0;
  Minutes time_extension = 0;
  bool feasible = false;
};

InsertionPlan plan_insertion(const Instance& instance,
                             const RouteSchedule& route,
                             std::size_t gap,
                             const Request& pickup,
                             const Request& delivery);

Minutes time_extension(const Instance& instance,
                       const RouteSchedule& route,
                       std::size_t gap,
                       const Request& pickup,
                       const Request& delivery);

bool insertion_feasible(const Instance& instance,
                        const RouteSchedule& route,
                        std::size_t gap,
                        const Request& pickup,
                        const Request& delivery);

// Inserts the pair and reschedules the route. Visits before the gap keep
// their times; the depot departure moves only for gap 0.
RouteSchedule apply_insertion(const Instance& instance,
                              const RouteSchedule& route,
                              const InsertionPlan& plan,
                              const Request& pickup,
                              const Request& delivery);

struct InsertionCandidate {
  RequestId pickup = 0;
  RequestId delivery = 0;
  int route = 0;
  std::size_t gap = 0;
  Minutes time_extension = 0;
};

// Feasible gap of minimum time extension, earliest gap on ties.
std::optional<InsertionPlan> best_insertion(const Instance& instance,
                                            const RouteSchedule& route,
                                            const Request& pickup,
                                            const Request& delivery);

Solution run_ch(const Instance& instance, Objective objective);

struct RhConfig {
  int iterations = 10000;
  std::uint64_t seed = 0;
  Objective objective = Objective::Profit;
  int threads = 1;
};

Solution run_rh(const Instance& instance, const RhConfig& config);

// One randomized construction, as performed by each RH iteration.
Solution run_rh_iteration(const Instance& instance,
                          const PreprocessResult& prep,
                          Objective objective,
                          std::uint64_t seed,
                          std::uint64_t iteration);

// Drops routes whose revenue does not cover the worker cost.
std::vector<RouteSchedule> drop_loss_routes(const Instance& instance,
                                            std::vector<RouteSchedule> routes);

} // namespace evrep
