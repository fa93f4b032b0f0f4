#include <gtest/gtest.h>

#include <filesystem>

#include "evrep/generator.h"
#include "evrep/insertion.h"
#include "evrep/instance_io.h"
#include "fixtures.h"

using namespace evrep;
using namespace evrep::testing;

namespace {

nlohmann::json tradeoff_json() {
  return instance_to_json(tradeoff_instance());
}

ErrorKind parse_error_kind(const nlohmann::json& doc) {
  try {
    instance_from_json(doc);
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::UnknownRequest;
}

} // namespace

TEST(InstanceJson, RoundTrip) {
  const auto inst = tradeoff_instance();
  EXPECT_EQ(parse_instance(dump_instance(inst)), inst);
  for (const auto& g : make_benchmark(BenchmarkSet::VamatLike, 3, 2)) {
    const auto text = dump_instance(g);
    EXPECT_EQ(parse_instance(text), g);
    EXPECT_EQ(dump_instance(parse_instance(text)), text);
  }
}

TEST(InstanceJson, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "evrep_toolkit_test.json";
  save_instance(tradeoff_instance(), path);
  EXPECT_EQ(load_instance(path), tradeoff_instance());
  std::filesystem::remove(path);
}

TEST(InstanceJson, MissingFieldIsParseError) {
  auto doc = tradeoff_json();
  doc["requests"][0].erase("tw_max");
  EXPECT_EQ(parse_error_kind(doc), ErrorKind::ParseError);
}

TEST(InstanceJson, WrongFormatTag) {
  auto doc = tradeoff_json();
  doc["format"] = "something-else";
  EXPECT_EQ(parse_error_kind(doc), ErrorKind::ParseError);
}

TEST(InstanceJson, WrongType) {
  auto doc = tradeoff_json();
  doc["parameters"]["duty_time"] = "long";
  EXPECT_EQ(parse_error_kind(doc), ErrorKind::ParseError);
}

TEST(InstanceJson, MalformedText) {
  try {
    parse_instance("{\n\"format\": ");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ParseError);
  }
}

TEST(InstanceJson, InvariantViolationsAreListed) {
  auto doc = tradeoff_json();
  doc["requests"][0]["battery"] = 1.5;
  doc["requests"][1]["tw_min"] = 500;
  try {
    instance_from_json(doc);
    FAIL();
  } catch (const InvalidInstanceError& e) {
    EXPECT_EQ(e.violations().size(), 2u);
  }
}

TEST(SolutionJson, RoundTripIsByteIdentical) {
  const auto inst = tradeoff_instance();
  const auto s = run_ch(inst, Objective::Requests);
  const auto text = dump_json(solution_to_json(s));
  const auto back = solution_from_json(parse_json(text));
  EXPECT_EQ(back, s);
  EXPECT_EQ(dump_json(solution_to_json(back)), text);
}

TEST(Generator, ZeroDemandGivesNoRequests) {
  GeneratorConfig config;
  config.demand_rate = 0;
  config.seed = 3;
  EXPECT_EQ(generate(config).size(), 0u);
}

TEST(Generator, SameSeedSameInstance) {
  GeneratorConfig config;
  config.seed = 77;
  EXPECT_EQ(dump_instance(generate(config)), dump_instance(generate(config)));
  auto other = config;
  other.seed = 78;
  EXPECT_NE(dump_instance(generate(config)), dump_instance(generate(other)));
}

TEST(Generator, RecordsProvenance) {
  GeneratorConfig config;
  config.seed = 12;
  const auto inst = generate(config);
  EXPECT_EQ(inst.provenance().seed, 12u);
  EXPECT_EQ(inst.provenance().config_hash, config_hash(config));
  config.demand_rate = 0.7;
  EXPECT_NE(inst.provenance().config_hash, config_hash(config));
}

TEST(Generator, RequestsAreWellFormed) {
  for (const auto& inst : make_benchmark(BenchmarkSet::VamatLike, 10, 8)) {
    for (const auto& r : inst.requests()) {
      EXPECT_LE(r.tw_min, r.tw_max);
      EXPECT_GE(r.battery, 0);
      EXPECT_LE(r.battery, 1);
    }
  }
}

TEST(Generator, VrcFrcRevenueRange) {
  GeneratorConfig config;
  config.seed = 4;
  config.revenue = VrcFrcRevenue{};
  const auto inst = generate(config);
  ASSERT_GT(inst.size(), 0u);
  for (const auto& r : inst.requests()) {
    EXPECT_GE(r.revenue, 16.45 - 1e-9);
    EXPECT_LE(r.revenue, 19.35 + 1e-9);
  }
}

TEST(Generator, SmallFleetMostlyDeliveries) {
  GeneratorConfig config;
  config.seed = 6;
  config.fleet_size = 4;
  const auto inst = generate(config);
  std::size_t deliveries = 0;
  for (const auto& r : inst.requests()) {
    deliveries += r.is_delivery() ? 1 : 0;
  }
  EXPECT_GT(deliveries, inst.size() - deliveries);
}

TEST(Generator, DegenerateConfigs) {
  GeneratorConfig config;
  config.station_count = 0;
  EXPECT_THROW(generate(config), Error);
  config = GeneratorConfig{};
  config.fleet_size = 1000;
  EXPECT_THROW(generate(config), Error);
  config = GeneratorConfig{};
  config.capacities = {2, 2};
  EXPECT_THROW(generate(config), Error);
  try {
    make_benchmark(BenchmarkSet::AmatLike, 0, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateConfig);
  }
}

TEST(Benchmark, AmatLikeAverageSize) {
  const auto set = make_benchmark(BenchmarkSet::AmatLike, 30, 1);
  ASSERT_EQ(set.size(), 30u);
  double total = 0;
  for (const auto& inst : set) {
    total += static_cast<double>(inst.size());
  }
  EXPECT_NEAR(total / 30, 22, 4);
}

TEST(Benchmark, SingleInstance) {
  EXPECT_EQ(make_benchmark(BenchmarkSet::VamatLike, 1, 3).size(), 1u);
}

TEST(Benchmark, SizeCaps) {
  for (const auto& inst : make_benchmark(BenchmarkSet::AmatLike, 20, 9, {4, 4})) {
    int pickups = 0;
    int deliveries = 0;
    for (const auto& r : inst.requests()) {
      (r.is_pickup() ? pickups : deliveries)++;
    }
    EXPECT_LE(pickups, 4);
    EXPECT_LE(deliveries, 4);
  }
}

TEST(Benchmark, IndependentOfCount) {
  const auto few = make_benchmark(BenchmarkSet::AmatLike, 2, 5);
  const auto many = make_benchmark(BenchmarkSet::AmatLike, 5, 5);
  EXPECT_EQ(few[1], many[1]);
}

TEST(Benchmark, SetNames) {
  EXPECT_EQ(benchmark_set_from_string("amat_like"), BenchmarkSet::AmatLike);
  EXPECT_EQ(benchmark_set_from_string("vamat"), BenchmarkSet::VamatLike);
  EXPECT_STREQ(to_string(BenchmarkSet::VamatLike), "vamat_like");
  EXPECT_THROW(benchmark_set_from_string("other"), Error);
}
