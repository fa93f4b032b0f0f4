#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "evrep/model.h"

namespace evrep::testing {

inline Request pickup(RequestId id,
                      LocationIndex location,
                      Minutes tw_min,
                      Minutes tw_max,
                      Fraction battery = 1.0,
                      Euros revenue = 20) {
  return {id, RequestKind::Pickup, location, tw_min, tw_max, battery, revenue, 0};
}

inline Request delivery(RequestId id,
                        LocationIndex location,
                        Minutes tw_min,
                        Minutes tw_max,
                        Fraction battery = 0.0,
                        Euros revenue = 20) {
  return {id, RequestKind::Delivery, location, tw_min, tw_max, battery, revenue, 0};
}

// Every pair of distinct locations `km` apart.
inline std::vector<std::vector<Km>> uniform_distances(std::size_t locations, Km km) {
  std::vector<std::vector<Km>> d(locations, std::vector<Km>(locations, km));
  for (std::size_t i = 0; i < locations; ++i) {
    d[i][i] = 0;
  }
  return d;
}

// Speeds giving 1 km = 1 minute by EV and 2 minutes by bike; unit handling.
inline Parameters unit_parameters() {
  Parameters p;
  p.ev_speed = 60;
  p.bike_speed = 30;
  p.park_and_unfold = 1;
  p.load_bike = 1;
  p.duty_time = 300;
  p.full_range = 150;
  p.full_recharge_time = 240;
  p.worker_count = 1;
  p.worker_cost = 60;
  return p;
}

// Points on a line: location i at coordinate x[i] (x[0] is the depot).
inline std::vector<std::vector<Km>> line_distances(const std::vector<Km>& x) {
  std::vector<std::vector<Km>> d(x.size(), std::vector<Km>(x.size(), 0));
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < x.size(); ++j) {
      d[i][j] = x[i] > x[j] ? x[i] - x[j] : x[j] - x[i];
    }
  }
  return d;
}

// Ten requests, every leg 10 km (20 min by EV, 30 min by bike), rev 10 each,
// C = 30, T = 240, two workers. Serving six requests needs two routes and
// earns nothing; the best profit comes from one route with two pairs.
inline Instance tradeoff_instance() {
  Parameters p;
  p.ev_speed = 30;
  p.bike_speed = 20;
  p.park_and_unfold = 1;
  p.load_bike = 1;
  p.duty_time = 240;
  p.full_range = 150;
  p.full_recharge_time = 240;
  p.worker_count = 2;
  p.worker_cost = 30;
  std::vector<Request> r = {
    pickup(1, 1, 30, 40, 1.0, 10),
    pickup(2, 2, 100, 110, 1.0, 10),
    pickup(3, 3, 30, 40, 1.0, 10),
    pickup(4, 4, 200, 205, 1.0, 10),
    pickup(5, 5, 200, 205, 1.0, 10),
    delivery(6, 6, 50, 70, 0.0, 10),
    delivery(7, 7, 120, 140, 0.0, 10),
    delivery(8, 8, 50, 70, 0.0, 10),
    delivery(9, 9, 0, 10, 0.0, 10),
    delivery(10, 10, 0, 10, 0.0, 10),
  };
  return Instance(p, std::move(r), uniform_distances(11, 10), FlatRevenue{10});
}

} // namespace evrep::testing
