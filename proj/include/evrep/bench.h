#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "evrep/exact.h"
#include "evrep/model.h"

namespace evrep {

enum class Algorithm { Nnh, Muh, Ch, Rh, Exact };

const char* to_string(Algorithm algorithm);
Algorithm algorithm_from_string(const std::string& name);
std::vector<Algorithm> algorithms_from_list(const std::string& comma_separated);

struct SolveOptions {
  Objective objective = Objective::Profit;
  std::uint64_t seed = 0;
  int iterations = 10000;
  int threads = 1;
  bool drop_loss_routes = true;
  OracleLimits limits;
};

struct SolveOutcome {
  Solution solution;
  // Set by the exact solver when the search completed.
  bool optimal = false;
  double seconds = 0;
};

SolveOutcome solve(const Instance& instance,
                   Algorithm algorithm,
                   const SolveOptions& options);

struct NamedInstance {
  std::string name;
  Instance instance;
};

struct ComparisonRow {
  std::string instance;
  std::string algorithm;
  std::size_t size = 0;
  double reference = 0;
  double value = 0;
  std::optional<double> gap;
  double delta_workers = 0;
  double seconds = 0;
};

struct ComparisonReport {
  Objective objective = Objective::Profit;
  std::string reference;
  // Per-instance rows, then one AVERAGE row per algorithm.
  std::vector<ComparisonRow> rows;
  std::vector<std::string> skipped;
};

// Gaps and worker differences of each algorithm against the reference
// solver. Instances the exact reference cannot handle are skipped.
ComparisonReport compare(const std::vector<NamedInstance>& instances,
                         const std::vector<Algorithm>& algorithms,
                         Algorithm reference,
                         const SolveOptions& options);

std::string to_csv(const ComparisonReport& report, bool with_timing = true);

struct SensitivityRow {
  std::string instance;
  std::string parameter;
  double value = 0;
  std::string algorithm;
  std::size_t size = 0;
  double profit = 0;
  std::size_t served = 0;
  double served_pct = 0;
  std::size_t workers = 0;
  double seconds = 0;
  // Profit dropped although the swept value grew.
  bool non_monotone = false;
};

struct SensitivityReport {
  std::string parameter;
  // Per (instance, value, algorithm) rows, then AVERAGE rows per
  // (value, algorithm).
  std::vector<SensitivityRow> rows;
  std::vector<std::string> skipped;
};

// Re-prices every request with each FRC value and re-solves.
SensitivityReport frc_sweep(const std::vector<NamedInstance>& instances,
                            const std::vector<double>& frc_values,
                            const std::vector<Algorithm>& algorithms,
                            const SolveOptions& options);

// Groups results by instance size.
SensitivityReport size_sweep(const std::vector<NamedInstance>& instances,
                             const std::vector<Algorithm>& algorithms,
                             const SolveOptions& options);

std::string to_csv(const SensitivityReport& report, bool with_timing = true);

// One line per (value, algorithm) with averaged profit, served share and
// workers, ready for plotting.
std::string series_csv(const SensitivityReport& report);

} // namespace evrep
