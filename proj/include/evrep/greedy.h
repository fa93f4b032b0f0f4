#pragma once

#include <optional>
#include <span>

#include "evrep/feasibility.h"
#include "evrep/model.h"

namespace evrep {

enum class GreedyPolicy { NearestNeighborhood, MostUrgent };

const char* to_string(GreedyPolicy policy);

struct GreedyOptions {
  Objective objective = Objective::Profit;
  // In profit mode, routes that lose money are dropped after construction.
  bool drop_loss_routes = true;
  FeasibilityOptions feasibility;
};

// Picks the next request among candidates of the kind the route expects.
// Pickup candidates are checked against the unserved deliveries compatible
// with them. Ties go to the lowest id.
std::optional<RequestId>
select_next(const Instance& instance,
            const ScheduleState& state,
            std::span<const RequestId> candidates,
            std::span<const RequestId> unserved_deliveries,
            GreedyPolicy policy,
            const FeasibilityOptions& options = {});

Solution run_greedy(const Instance& instance,
                    GreedyPolicy policy,
                    const GreedyOptions& options = {});

} // namespace evrep
