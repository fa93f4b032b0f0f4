#include "evrep/generator.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <random>
#include <sstream>

namespace evrep {

namespace {

std::mt19937_64 seeded(std::uint64_t seed, std::uint64_t stream = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

std::vector<int> capacities_of(const GeneratorConfig& config) {
  if (!config.capacities.empty()) {
    return config.capacities;
  }
  std::vector<int> caps(static_cast<std::size_t>(config.station_count), 2);
  for (std::size_t i = 0; i < caps.size() && i < 5; ++i) {
    caps[i] = 4;
  }
  return caps;
}

struct Draft {
  RequestKind kind;
  int station;
  Minutes tw_min;
  Minutes tw_max;
  Fraction battery;
  Minutes rent;
};

struct Trip {
  int arrive;
  int ev;
  int to;
  Km km;
  Minutes rent;
};

} // namespace

std::string config_hash(const GeneratorConfig& c) {
  std::ostringstream out;
  out.precision(17);
  out << c.station_count << '|';
  for (int cap : c.capacities) {
    out << cap << ',';
  }
  out << '|' << c.fleet_size << '|' << c.horizon << '|' << c.demand_rate << '|'
      << c.seed << '|' << c.area_side << '|' << c.detour_factor << '|'
      << c.initial_charge_min << '|' << c.initial_charge_max << '|'
      << c.max_pickups << '|' << c.max_deliveries << '|' << c.max_requests
      << '|';
  if (const auto* flat = std::get_if<FlatRevenue>(&c.revenue)) {
    out << "flat," << flat->amount;
  } else {
    const auto& v = std::get<VrcFrcRevenue>(c.revenue);
    out << "vrc_frc," << v.rate_per_min << ',' << v.rent_min << ','
        << v.rent_max << ',' << v.frc;
  }
  const auto& p = c.parameters;
  out << '|' << p.duty_time << ',' << p.ev_speed << ',' << p.bike_speed << ','
      << p.park_and_unfold << ',' << p.load_bike << ',' << p.full_range << ','
      << p.full_recharge_time << ',' << p.worker_count << ',' << p.worker_cost;

  // FNV-1a, stable across platforms.
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : out.str()) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
  return hex;
}

Instance generate(const GeneratorConfig& config) {
  const auto caps = capacities_of(config);
  if (config.station_count < 1) {
    throw Error(ErrorKind::DegenerateConfig, "at least one station is required");
  }
  if (caps.size() != static_cast<std::size_t>(config.station_count)) {
    throw Error(ErrorKind::DegenerateConfig,
                "capacities must list one value per station");
  }
  int slots = 0;
  for (int cap : caps) {
    if (cap < 1) {
      throw Error(ErrorKind::DegenerateConfig, "station capacity must be positive");
    }
    slots += cap;
  }
  const int fleet = config.fleet_size > 0
                      ? config.fleet_size
                      : std::max(1, static_cast<int>(std::lround(0.6 * slots)));
  if (fleet > slots) {
    throw Error(ErrorKind::DegenerateConfig, "fleet exceeds the number of slots");
  }
  if (!(config.horizon >= 1) || !(config.demand_rate >= 0) ||
      !(config.area_side > 0) || !(config.detour_factor >= 1) ||
      !(config.initial_charge_min >= 0) ||
      !(config.initial_charge_min <= config.initial_charge_max) ||
      !(config.initial_charge_max <= 1)) {
    throw Error(ErrorKind::DegenerateConfig, "invalid generator settings");
  }
  if (auto problems = check_parameters(config.parameters); !problems.empty()) {
    throw InvalidInstanceError(std::move(problems));
  }

  Minutes rent_min = 5;
  Minutes rent_max = 15;
  if (const auto* v = std::get_if<VrcFrcRevenue>(&config.revenue)) {
    rent_min = v->rent_min;
    rent_max = v->rent_max;
  }

  auto rng = seeded(config.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t n = caps.size();

  std::vector<double> xs(n);
  std::vector<double> ys(n);
  for (std::size_t s = 0; s < n; ++s) {
    xs[s] = unit(rng) * config.area_side;
    ys[s] = unit(rng) * config.area_side;
  }
  auto station_km = [&](std::size_t a, std::size_t b) {
    return config.detour_factor * std::hypot(xs[a] - xs[b], ys[a] - ys[b]);
  };

  // Origin-destination weights standing in for an O-D matrix.
  std::vector<double> weights(n * n, 0.0);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      weights[a * n + b] = a == b ? 0.0 : unit(rng);
    }
  }
  if (n == 1) {
    weights[0] = 1.0;
  }
  std::discrete_distribution<std::size_t> pair_draw(weights.begin(), weights.end());
  std::poisson_distribution<int> arrivals(config.demand_rate);
  std::uniform_real_distribution<double> rent_draw(rent_min, rent_max);
  std::uniform_real_distribution<double> charge_draw(config.initial_charge_min,
                                                     config.initial_charge_max);

  std::vector<Fraction> charge(static_cast<std::size_t>(fleet));
  std::vector<std::vector<int>> docked(n);
  std::vector<std::deque<int>> overflow(n);
  for (int ev = 0, s = 0; ev < fleet; ++ev) {
    while (static_cast<int>(docked[static_cast<std::size_t>(s)].size()) >=
           caps[static_cast<std::size_t>(s)]) {
      s = (s + 1) % static_cast<int>(n);
    }
    charge[static_cast<std::size_t>(ev)] = charge_draw(rng);
    docked[static_cast<std::size_t>(s)].push_back(ev);
    s = (s + 1) % static_cast<int>(n);
  }

  std::vector<Draft> drafts;
  std::vector<int> open_delivery(n, -1);
  std::vector<std::deque<int>> open_pickups(n);
  std::vector<Trip> trips;
  int pickups = 0;
  int deliveries = 0;
  const Parameters& prm = config.parameters;

  auto may_emit = [&](RequestKind kind) {
    if (config.max_requests > 0 &&
        pickups + deliveries >= config.max_requests) {
      return false;
    }
    if (kind == RequestKind::Pickup) {
      return config.max_pickups == 0 || pickups < config.max_pickups;
    }
    return config.max_deliveries == 0 || deliveries < config.max_deliveries;
  };

  const int horizon = static_cast<int>(std::ceil(config.horizon));
  for (int minute = 0; minute < horizon; ++minute) {
    // Returns first, in departure order.
    std::vector<Trip> still;
    for (const auto& trip : trips) {
      if (trip.arrive != minute) {
        still.push_back(trip);
        continue;
      }
      const auto s = static_cast<std::size_t>(trip.to);
      auto& c = charge[static_cast<std::size_t>(trip.ev)];
      c = std::max(0.0, c - trip.km / prm.full_range);
      if (open_delivery[s] >= 0) {
        drafts[static_cast<std::size_t>(open_delivery[s])].tw_max = minute;
        open_delivery[s] = -1;
      }
      if (static_cast<int>(docked[s].size()) < caps[s]) {
        docked[s].push_back(trip.ev);
      } else {
        overflow[s].push_back(trip.ev);
        int index = -1;
        if (may_emit(RequestKind::Pickup)) {
          index = static_cast<int>(drafts.size());
          drafts.push_back({RequestKind::Pickup,
                            trip.to,
                            static_cast<Minutes>(minute),
                            config.horizon,
                            c,
                            trip.rent});
          ++pickups;
        }
        open_pickups[s].push_back(index);
      }
    }
    trips = std::move(still);

    const int demand = arrivals(rng);
    for (int k = 0; k < demand; ++k) {
      const std::size_t pair = pair_draw(rng);
      const std::size_t from = pair / n;
      const std::size_t to = pair % n;
      const Minutes rent = rent_draw(rng);
      const Km km = station_km(from, to);
      if (docked[from].empty()) {
        if (open_delivery[from] < 0 && may_emit(RequestKind::Delivery)) {
          open_delivery[from] = static_cast<int>(drafts.size());
          drafts.push_back({RequestKind::Delivery,
                            static_cast<int>(from),
                            static_cast<Minutes>(minute),
                            config.horizon,
                            std::min(1.0, km / prm.full_range),
                            rent});
          ++deliveries;
        }
        continue;
      }
      auto& here = docked[from];
      auto best = std::max_element(here.begin(), here.end(), [&](int a, int b) {
        return charge[static_cast<std::size_t>(a)] <
               charge[static_cast<std::size_t>(b)];
      });
      const int ev = *best;
      here.erase(best);
      trips.push_back({minute + std::max(1, static_cast<int>(std::lround(rent))),
                       ev,
                       static_cast<int>(to),
                       km,
                       rent});
      if (!overflow[from].empty()) {
        here.push_back(overflow[from].front());
        overflow[from].pop_front();
        const int index = open_pickups[from].front();
        open_pickups[from].pop_front();
        if (index >= 0) {
          drafts[static_cast<std::size_t>(index)].tw_max = minute;
        }
      }
    }

    for (const auto& station : docked) {
      for (int ev : station) {
        auto& c = charge[static_cast<std::size_t>(ev)];
        c = std::min(1.0, c + 1.0 / prm.full_recharge_time);
      }
    }
  }

  std::vector<Request> requests;
  requests.reserve(drafts.size());
  for (std::size_t i = 0; i < drafts.size(); ++i) {
    const auto& d = drafts[i];
    Request r;
    r.id = static_cast<RequestId>(i + 1);
    r.kind = d.kind;
    r.location = i + 1;
    r.tw_min = d.tw_min;
    r.tw_max = d.tw_max;
    r.battery = d.battery;
    if (const auto* flat = std::get_if<FlatRevenue>(&config.revenue)) {
      r.revenue = flat->amount;
    } else {
      const auto& v = std::get<VrcFrcRevenue>(config.revenue);
      r.rent_minutes = d.rent;
      r.revenue = v.rate_per_min * d.rent + v.frc;
    }
    requests.push_back(r);
  }

  const double cx = config.area_side / 2;
  const double cy = config.area_side / 2;
  auto point_x = [&](std::size_t loc) {
    return loc == kDepot ? cx : xs[static_cast<std::size_t>(drafts[loc - 1].station)];
  };
  auto point_y = [&](std::size_t loc) {
    return loc == kDepot ? cy : ys[static_cast<std::size_t>(drafts[loc - 1].station)];
  };
  const std::size_t locations = drafts.size() + 1;
  std::vector<std::vector<Km>> distances(locations, std::vector<Km>(locations, 0.0));
  for (std::size_t a = 0; a < locations; ++a) {
    for (std::size_t b = 0; b < locations; ++b) {
      if (a != b) {
        distances[a][b] = config.detour_factor *
                          std::hypot(point_x(a) - point_x(b), point_y(a) - point_y(b));
      }
    }
  }

  return Instance(config.parameters,
                  std::move(requests),
                  std::move(distances),
                  config.revenue,
                  Provenance{"evrep-sim", config.seed, config_hash(config)});
}

const char* to_string(BenchmarkSet set) {
  return set == BenchmarkSet::AmatLike ? "amat_like" : "vamat_like";
}

BenchmarkSet benchmark_set_from_string(const std::string& name) {
  if (name == "amat_like" || name == "amat") {
    return BenchmarkSet::AmatLike;
  }
  if (name == "vamat_like" || name == "vamat") {
    return BenchmarkSet::VamatLike;
  }
  throw Error(ErrorKind::ParseError, "unknown benchmark set '" + name + "'");
}

GeneratorConfig benchmark_config(BenchmarkSet set,
                                 std::uint64_t seed,
                                 int index,
                                 const BenchmarkSize& size) {
  auto rng = seeded(seed, static_cast<std::uint64_t>(index) + 1);
  GeneratorConfig config;
  config.seed = rng();
  if (set == BenchmarkSet::AmatLike) {
    config.revenue = FlatRevenue{20};
  } else {
    config.revenue = VrcFrcRevenue{};
  }
  if (size.max_pickups > 0 || size.max_deliveries > 0) {
    config.max_pickups = size.max_pickups;
    config.max_deliveries = size.max_deliveries;
    config.parameters.worker_count = 2;
    return config;
  }
  const int low = 15;
  const int high = set == BenchmarkSet::AmatLike ? 29 : 45;
  config.max_requests = std::uniform_int_distribution<int>(low, high)(rng);
  config.parameters.worker_count = 4;
  return config;
}

std::vector<Instance> make_benchmark(BenchmarkSet set,
                                     int count,
                                     std::uint64_t seed,
                                     const BenchmarkSize& size) {
  if (count < 1) {
    throw Error(ErrorKind::DegenerateConfig, "benchmark count must be positive");
  }
  std::vector<Instance> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    out.push_back(generate(benchmark_config(set, seed, i, size)));
  }
  return out;
}

} // namespace evrep
