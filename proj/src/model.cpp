#include "evrep/model.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace evrep {

const char* to_string(ErrorKind kind) {
  switch (kind) {
  case ErrorKind::UnknownRequest:
    return "UnknownRequest";
  case ErrorKind::WrongKind:
    return "WrongKind";
  case ErrorKind::IndexOutOfRange:
    return "IndexOutOfRange";
  case ErrorKind::GapOutOfRange:
    return "GapOutOfRange";
  case ErrorKind::InvalidInstance:
    return "InvalidInstance";
  case ErrorKind::ParseError:
    return "ParseError";
  case ErrorKind::InstanceTooLarge:
    return "InstanceTooLarge";
  case ErrorKind::DegenerateConfig:
    return "DegenerateConfig";
  case ErrorKind::AccountingMismatch:
    return "AccountingMismatch";
  }
  return "Unknown";
}

const char* to_string(Objective objective) {
  return objective == Objective::Profit ? "profit" : "requests";
}

Objective objective_from_string(const std::string& name) {
  if (name == "profit") {
    return Objective::Profit;
  }
  if (name == "requests") {
    return Objective::Requests;
  }
  throw Error(ErrorKind::ParseError, "unknown objective '" + name + "'");
}

const char* to_string(RequestKind kind) {
  return kind == RequestKind::Pickup ? "pickup" : "delivery";
}

RequestKind request_kind_from_string(const std::string& name) {
  if (name == "pickup") {
    return RequestKind::Pickup;
  }
  if (name == "delivery") {
    return RequestKind::Delivery;
  }
  throw Error(ErrorKind::ParseError, "unknown request kind '" + name + "'");
}

namespace {

std::string join(const std::vector<std::string>& lines) {
  std::ostringstream out;
  out << "invalid instance (" << lines.size() << " violation"
      << (lines.size() == 1 ? "" : "s") << ")";
  for (const auto& line : lines) {
    out << "\n  " << line;
  }
  return out.str();
}

bool positive(double value) {
  return std::isfinite(value) && value > 0;
}

} // namespace

std::vector<std::string> check_parameters(const Parameters& p) {
  std::vector<std::string> out;
  auto require_positive = [&](double value, const char* name) {
    if (!positive(value)) {
      out.push_back(std::string("parameter ") + name +
                    " must be strictly positive");
    }
  };
  require_positive(p.duty_time, "duty_time");
  require_positive(p.ev_speed, "ev_speed");
  require_positive(p.bike_speed, "bike_speed");
  if (!(p.park_and_unfold >= 0) || !std::isfinite(p.park_and_unfold)) {
    out.emplace_back("parameter park_and_unfold must be non-negative");
  }
  if (!(p.load_bike >= 0) || !std::isfinite(p.load_bike)) {
    out.emplace_back("parameter load_bike must be non-negative");
  }
  require_positive(p.full_range, "full_range");
  require_positive(p.full_recharge_time, "full_recharge_time");
  if (p.worker_count < 1) {
    out.emplace_back("parameter worker_count must be at least 1");
  }
  if (!std::isfinite(p.worker_cost) || p.worker_cost < 0) {
    out.emplace_back("parameter worker_cost must be non-negative");
  }
  return out;
}

InvalidInstanceError::InvalidInstanceError(std::vector<std::string> violations)
  : Error(ErrorKind::InvalidInstance, join(violations)),
    _violations(std::move(violations)) {
}

std::vector<std::string>
Instance::violations(const Parameters& parameters,
                     const std::vector<Request>& requests,
                     const std::vector<std::vector<Km>>& distances) {
  std::vector<std::string> out = check_parameters(parameters);

  std::set<RequestId> ids;
  for (std::size_t i = 0; i < requests.size(); ++i) {
    const auto& r = requests[i];
    const std::string tag = "request " + std::to_string(r.id);
    if (!ids.insert(r.id).second) {
      out.push_back(tag + ": duplicate id");
    }
    if (r.location != i + 1) {
      out.push_back(tag + ": location must be " + std::to_string(i + 1));
    }
    if (!std::isfinite(r.tw_min) || !std::isfinite(r.tw_max)) {
      out.push_back(tag + ": time window must be finite");
    } else if (r.tw_min > r.tw_max) {
      out.push_back(tag + ": tw_min > tw_max");
    }
    if (!(r.battery >= 0 && r.battery <= 1)) {
      out.push_back(tag + ": battery outside [0, 1]");
    }
    if (!(r.revenue >= 0) || !std::isfinite(r.revenue)) {
      out.push_back(tag + ": negative revenue");
    }
    if (!(r.rent_minutes >= 0) || !std::isfinite(r.rent_minutes)) {
      out.push_back(tag + ": negative rent_minutes");
    }
  }

  const std::size_t n = requests.size() + 1;
  if (distances.size() != n) {
    out.push_back("distance matrix must have " + std::to_string(n) + " rows");
    return out;
  }
  bool square = true;
  for (std::size_t i = 0; i < n; ++i) {
    if (distances[i].size() != n) {
      out.push_back("distance row " + std::to_string(i) + " must have " +
                    std::to_string(n) + " entries");
      square = false;
    }
  }
  if (!square) {
    return out;
  }

  bool entries_ok = true;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double l = distances[i][j];
      const std::string cell =
        "distance[" + std::to_string(i) + "][" + std::to_string(j) + "]";
      if (!std::isfinite(l) || l < 0) {
        out.push_back(cell + " must be finite and non-negative");
        entries_ok = false;
      } else if (i == j && l != 0) {
        out.push_back(cell + " must be zero");
        entries_ok = false;
      }
    }
  }
  if (!entries_ok) {
    return out;
  }

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const double direct = distances[i][k];
      const double tol = 1e-9 * (1.0 + direct);
      for (std::size_t j = 0; j < n; ++j) {
        if (direct > distances[i][j] + distances[j][k] + tol) {
          out.push_back("triangle inequality violated: distance[" +
                        std::to_string(i) + "][" + std::to_string(k) +
                        "] > via " + std::to_string(j));
          break;
        }
      }
    }
  }
  return out;
}

Instance::Instance(Parameters parameters,
                   std::vector<Request> requests,
                   std::vector<std::vector<Km>> distances,
                   RevenueModel revenue_model,
                   Provenance provenance)
  : _parameters(parameters),
    _requests(std::move(requests)),
    _revenue_model(revenue_model),
    _provenance(std::move(provenance)) {
  auto problems = violations(_parameters, _requests, distances);
  if (!problems.empty()) {
    throw InvalidInstanceError(std::move(problems));
  }

  const std::size_t n = location_count();
  _distances.resize(n * n);
  _bike_times.resize(n * n);
  _ev_times.resize(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const Km l = distances[i][j];
      _distances[i * n + j] = l;
      _bike_times[i * n + j] = l / _parameters.bike_speed * 60.0;
      _ev_times[i * n + j] = l / _parameters.ev_speed * 60.0;
    }
  }
  for (std::size_t i = 0; i < _requests.size(); ++i) {
    _index.emplace(_requests[i].id, i);
  }
}

bool Instance::contains(RequestId id) const {
  return _index.contains(id);
}

std::size_t Instance::position(RequestId id) const {
  auto it = _index.find(id);
  if (it == _index.end()) {
    throw Error(ErrorKind::UnknownRequest,
                "unknown request id " + std::to_string(id));
  }
  return it->second;
}

const Request& Instance::request(RequestId id) const {
  return _requests[position(id)];
}

std::vector<std::vector<Km>> Instance::distance_matrix() const {
  const std::size_t n = location_count();
  std::vector<std::vector<Km>> out(n, std::vector<Km>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      out[i][j] = _distances[i * n + j];
    }
  }
  return out;
}

Instance Instance::with_parameters(const Parameters& parameters) const {
  return Instance(parameters,
                  _requests,
                  distance_matrix(),
                  _revenue_model,
                  _provenance);
}

Instance Instance::with_requests(std::vector<Request> requests) const {
  return Instance(_parameters,
                  std::move(requests),
                  distance_matrix(),
                  _revenue_model,
                  _provenance);
}

Instance Instance::with_frc(Euros frc) const {
  const auto* model = std::get_if<VrcFrcRevenue>(&_revenue_model);
  if (model == nullptr) {
    throw Error(ErrorKind::InvalidInstance,
                "FRC re-pricing requires a vrc_frc revenue model");
  }
  VrcFrcRevenue repriced = *model;
  repriced.frc = frc;
  auto requests = _requests;
  for (auto& r : requests) {
    r.revenue = repriced.rate_per_min * r.rent_minutes + frc;
  }
  return Instance(_parameters,
                  std::move(requests),
                  distance_matrix(),
                  repriced,
                  _provenance);
}

bool Instance::operator==(const Instance& other) const {
  return _parameters == other._parameters && _requests == other._requests &&
         _distances == other._distances &&
         _revenue_model == other._revenue_model &&
         _provenance == other._provenance;
}

Minutes travel_time(const Instance& instance,
                    LocationIndex from,
                    LocationIndex to,
                    TravelMode mode) {
  if (from >= instance.location_count() || to >= instance.location_count()) {
    throw Error(ErrorKind::IndexOutOfRange,
                "location index out of range: " + std::to_string(from) +
                  " -> " + std::to_string(to));
  }
  return mode == TravelMode::Bike ? instance.bike_time(from, to)
                                  : instance.ev_time(from, to);
}

Solution make_solution(const Instance& instance,
                       std::vector<RouteSchedule> routes) {
  Solution solution;
  std::set<RequestId> served;
  int worker = 0;
  for (auto& route : routes) {
    route.worker = worker++;
    for (const auto& visit : route.visits) {
      served.insert(visit.request);
      solution.total_revenue += instance.request(visit.request).revenue;
    }
  }
  solution.routes = std::move(routes);
  solution.served.assign(served.begin(), served.end());
  for (const auto& r : instance.requests()) {
    if (!served.contains(r.id)) {
      solution.rejected.push_back(r.id);
    }
  }
  std::sort(solution.rejected.begin(), solution.rejected.end());
  solution.worker_cost = instance.parameters().worker_cost *
                         static_cast<double>(solution.routes.size());
  solution.profit = solution.total_revenue - solution.worker_cost;
  return solution;
}

Euros evaluate_profit(const Solution& solution, const Instance& instance) {
  Euros revenue = 0;
  for (RequestId id : solution.served) {
    revenue += instance.request(id).revenue;
  }
  const Euros profit =
    revenue - instance.parameters().worker_cost *
                static_cast<double>(solution.routes.size());
  if (std::abs(profit - solution.profit) > 1e-9 * (1.0 + std::abs(profit))) {
    std::ostringstream msg;
    msg << "stored profit " << solution.profit << " differs from recomputed "
        << profit;
    throw Error(ErrorKind::AccountingMismatch, msg.str());
  }
  return profit;
}

std::size_t count_served(const Solution& solution) {
  return solution.served.size();
}

double objective_value(const Solution& solution, Objective objective) {
  return objective == Objective::Profit
           ? solution.profit
           : static_cast<double>(solution.served.size());
}

bool better_solution(const Solution& a,
                     const Solution& b,
                     Objective objective) {
  const double va = objective_value(a, objective);
  const double vb = objective_value(b, objective);
  if (va > vb + 1e-9) {
    return true;
  }
  if (va < vb - 1e-9) {
    return false;
  }
  return a.routes.size() < b.routes.size();
}

} // namespace evrep
