#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "evrep/feasibility.h"
#include "evrep/model.h"

namespace evrep {

struct OracleLimits {
  std::size_t max_requests = 10;
  // Zero disables the limit.
  double time_budget_seconds = 0;
  std::uint64_t max_nodes = 0;
};

struct ExactResult {
  Solution solution;
  // False when a time or node limit stopped the search early; the solution is
  // then the best one found so far.
  bool optimal = true;
  std::uint64_t nodes = 0;
};

// Exhaustive search over all sets of at most K feasible routes. Throws
// InstanceTooLarge past limits.max_requests.
ExactResult solve_exact(const Instance& instance,
                        Objective objective,
                        const OracleLimits& limits = {});

// Depot departures for which the alternating sequence passes every per-visit
// condition. Empty when no departure works.
struct DepartureInterval {
  Minutes earliest = 0;
  Minutes latest = 0;
};

std::optional<DepartureInterval>
feasible_departures(const Instance& instance,
                    std::span<const RequestId> sequence);

// Schedules the sequence from a feasible departure (the one closest to
// reaching the first pickup at its window opening) and returns the route if
// the validator accepts it.
std::optional<RouteSchedule> schedule_sequence(const Instance& instance,
                                               std::span<const RequestId> sequence,
                                               int worker = 0);

// Percentage gap of a heuristic value against a reference value. Both zero
// gives 0; a zero reference with a nonzero heuristic value is undefined.
std::optional<double> optimality_gap(double heuristic, double reference);

std::optional<double> optimality_gap(const Solution& heuristic,
                                     const Solution& reference,
                                     Objective objective);

} // namespace evrep
