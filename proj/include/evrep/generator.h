#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "evrep/model.h"

namespace evrep {

// Minute-stepped car-sharing simulation producing relocation requests.
struct GeneratorConfig {
  int station_count = 26;
  // Slots per station; empty means 4 slots for the first five stations and
  // 2 for the others.
  std::vector<int> capacities;
  // EVs in circulation; 0 means 60% of all slots.
  int fleet_size = 0;
  Minutes horizon = 480;
  // Expected trip requests per minute over the whole network.
  double demand_rate = 0.5;
  std::uint64_t seed = 0;
  RevenueModel revenue = FlatRevenue{};
  Parameters parameters;
  Km area_side = 10;
  double detour_factor = 1.3;
  Fraction initial_charge_min = 0.4;
  Fraction initial_charge_max = 1.0;
  // Emission caps; 0 means unlimited. The simulation keeps running after a
  // cap is hit so that windows of emitted requests still close correctly.
  int max_pickups = 0;
  int max_deliveries = 0;
  int max_requests = 0;
};

// Hash of every field that influences the output, recorded as provenance.
std::string config_hash(const GeneratorConfig& config);

// Throws Error(DegenerateConfig) for unusable configurations.
Instance generate(const GeneratorConfig& config);

enum class BenchmarkSet { AmatLike, VamatLike };

const char* to_string(BenchmarkSet set);
BenchmarkSet benchmark_set_from_string(const std::string& name);

// Overrides the size targets of a benchmark set; 0 keeps the set default.
struct BenchmarkSize {
  int max_pickups = 0;
  int max_deliveries = 0;
};

// Configuration of instance `index` of a benchmark set.
GeneratorConfig benchmark_config(BenchmarkSet set,
                                 std::uint64_t seed,
                                 int index,
                                 const BenchmarkSize& size = {});

std::vector<Instance> make_benchmark(BenchmarkSet set,
                                     int count,
                                     std::uint64_t seed,
                                     const BenchmarkSize& size = {});

} // namespace evrep
