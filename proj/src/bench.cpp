#include "evrep/bench.h"

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <map>
#include <sstream>

#include "evrep/greedy.h"
#include "evrep/insertion.h"

namespace evrep {

const char* to_string(Algorithm algorithm) {
  switch (algorithm) {
  case Algorithm::Nnh:
    return "nnh";
  case Algorithm::Muh:
    return "muh";
  case Algorithm::Ch:
    return "ch";
  case Algorithm::Rh:
    return "rh";
  case Algorithm::Exact:
    return "exact";
  }
  return "unknown";
}

Algorithm algorithm_from_string(const std::string& name) {
  for (auto a : {Algorithm::Nnh,
                 Algorithm::Muh,
                 Algorithm::Ch,
                 Algorithm::Rh,
                 Algorithm::Exact}) {
    if (name == to_string(a)) {
      return a;
    }
  }
  throw Error(ErrorKind::ParseError, "unknown algorithm '" + name + "'");
}

std::vector<Algorithm> algorithms_from_list(const std::string& list) {
  std::vector<Algorithm> out;
  std::stringstream in(list);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) {
      out.push_back(algorithm_from_string(item));
    }
  }
  if (out.empty()) {
    throw Error(ErrorKind::ParseError, "empty algorithm list");
  }
  return out;
}

SolveOutcome solve(const Instance& instance,
                   Algorithm algorithm,
                   const SolveOptions& options) {
  SolveOutcome out;
  const auto began = std::chrono::steady_clock::now();
  switch (algorithm) {
  case Algorithm::Nnh:
  case Algorithm::Muh: {
    GreedyOptions greedy;
    greedy.objective = options.objective;
    greedy.drop_loss_routes = options.drop_loss_routes;
    out.solution = run_greedy(instance,
                              algorithm == Algorithm::Nnh
                                ? GreedyPolicy::NearestNeighborhood
                                : GreedyPolicy::MostUrgent,
                              greedy);
    break;
  }
  case Algorithm::Ch:
    out.solution = run_ch(instance, options.objective);
    break;
  case Algorithm::Rh:
    out.solution = run_rh(instance,
                          {options.iterations,
                           options.seed,
                           options.objective,
                           options.threads});
    break;
  case Algorithm::Exact: {
    auto result = solve_exact(instance, options.objective, options.limits);
    out.solution = std::move(result.solution);
    out.optimal = result.optimal;
    break;
  }
  }
  const std::chrono::duration<double> elapsed =
    std::chrono::steady_clock::now() - began;
  out.seconds = elapsed.count();
  return out;
}

namespace {

std::string fixed(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.6f", value);
  return buffer;
}

bool too_large(const Instance& instance,
               Algorithm algorithm,
               const SolveOptions& options) {
  return algorithm == Algorithm::Exact &&
         instance.size() > options.limits.max_requests;
}

} // namespace

ComparisonReport compare(const std::vector<NamedInstance>& instances,
                         const std::vector<Algorithm>& algorithms,
                         Algorithm reference,
                         const SolveOptions& options) {
  ComparisonReport report;
  report.objective = options.objective;
  report.reference = to_string(reference);

  struct Totals {
    double gap = 0;
    std::size_t gaps = 0;
    double delta_workers = 0;
    double seconds = 0;
    std::size_t rows = 0;
  };
  std::vector<Totals> totals(algorithms.size());

  for (const auto& named : instances) {
    const bool skip =
      too_large(named.instance, reference, options) ||
      std::any_of(algorithms.begin(), algorithms.end(), [&](Algorithm a) {
        return too_large(named.instance, a, options);
      });
    if (skip) {
      report.skipped.push_back(named.name);
      continue;
    }
    const auto ref = solve(named.instance, reference, options);
    const double ref_value = objective_value(ref.solution, options.objective);
    for (std::size_t k = 0; k < algorithms.size(); ++k) {
      const auto run = algorithms[k] == reference
                         ? ref
                         : solve(named.instance, algorithms[k], options);
      ComparisonRow row;
      row.instance = named.name;
      row.algorithm = to_string(algorithms[k]);
      row.size = named.instance.size();
      row.reference = ref_value;
      row.value = objective_value(run.solution, options.objective);
      row.gap = optimality_gap(row.value, ref_value);
      row.delta_workers = static_cast<double>(ref.solution.routes.size()) -
                          static_cast<double>(run.solution.routes.size());
      row.seconds = run.seconds;
      auto& t = totals[k];
      if (row.gap) {
        t.gap += *row.gap;
        ++t.gaps;
      }
      t.delta_workers += row.delta_workers;
      t.seconds += row.seconds;
      ++t.rows;
      report.rows.push_back(std::move(row));
    }
  }

  for (std::size_t k = 0; k < algorithms.size(); ++k) {
    const auto& t = totals[k];
    if (t.rows == 0) {
      continue;
    }
    ComparisonRow row;
    row.instance = "AVERAGE";
    row.algorithm = to_string(algorithms[k]);
    if (t.gaps > 0) {
      row.gap = t.gap / static_cast<double>(t.gaps);
    }
    row.delta_workers = t.delta_workers / static_cast<double>(t.rows);
    row.seconds = t.seconds / static_cast<double>(t.rows);
    double reference = 0;
    double value = 0;
    std::size_t size = 0;
    for (const auto& r : report.rows) {
      if (r.algorithm == row.algorithm && r.instance != "AVERAGE") {
        reference += r.reference;
        value += r.value;
        size += r.size;
      }
    }
    row.reference = reference / static_cast<double>(t.rows);
    row.value = value / static_cast<double>(t.rows);
    row.size = size / t.rows;
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::string to_csv(const ComparisonReport& report, bool with_timing) {
  const bool profit = report.objective == Objective::Profit;
  std::ostringstream out;
  out << "instance,algorithm,reference_algorithm,size,reference_value,value,"
      << (profit ? "gap_profit_pct" : "gap_requests_pct")
      << ",delta_workers,cpu_s\n";
  for (const auto& r : report.rows) {
    out << r.instance << ',' << r.algorithm << ',' << report.reference << ','
        << r.size << ',' << fixed(r.reference) << ',' << fixed(r.value) << ','
        << (r.gap ? fixed(*r.gap) : std::string()) << ','
        << fixed(r.delta_workers) << ','
        << (with_timing ? fixed(r.seconds) : std::string()) << '\n';
  }
  return out.str();
}

namespace {

SensitivityRow measure(const NamedInstance& named,
                       const Instance& instance,
                       const std::string& parameter,
                       double value,
                       Algorithm algorithm,
                       const SolveOptions& options) {
  const auto run = solve(instance, algorithm, options);
  SensitivityRow row;
  row.instance = named.name;
  row.parameter = parameter;
  row.value = value;
  row.algorithm = to_string(algorithm);
  row.size = instance.size();
  row.profit = run.solution.profit;
  row.served = run.solution.served.size();
  row.served_pct = instance.size() == 0
                     ? 0.0
                     : 100.0 * static_cast<double>(row.served) /
                         static_cast<double>(instance.size());
  row.workers = run.solution.routes.size();
  row.seconds = run.seconds;
  return row;
}

void add_averages(SensitivityReport& report) {
  struct Sum {
    double profit = 0;
    double served = 0;
    double served_pct = 0;
    double workers = 0;
    double seconds = 0;
    double size = 0;
    std::size_t count = 0;
  };
  std::map<std::pair<double, std::string>, Sum> sums;
  std::vector<std::pair<double, std::string>> order;
  for (const auto& r : report.rows) {
    const auto key = std::make_pair(r.value, r.algorithm);
    auto [it, fresh] = sums.try_emplace(key);
    if (fresh) {
      order.push_back(key);
    }
    auto& s = it->second;
    s.profit += r.profit;
    s.served += static_cast<double>(r.served);
    s.served_pct += r.served_pct;
    s.workers += static_cast<double>(r.workers);
    s.seconds += r.seconds;
    s.size += static_cast<double>(r.size);
    ++s.count;
  }
  std::sort(order.begin(), order.end());
  for (const auto& key : order) {
    const auto& s = sums[key];
    const double n = static_cast<double>(s.count);
    SensitivityRow row;
    row.instance = "AVERAGE";
    row.parameter = report.parameter;
    row.value = key.first;
    row.algorithm = key.second;
    row.size = static_cast<std::size_t>(s.size / n + 0.5);
    row.profit = s.profit / n;
    row.served = static_cast<std::size_t>(s.served / n + 0.5);
    row.served_pct = s.served_pct / n;
    row.workers = static_cast<std::size_t>(s.workers / n + 0.5);
    row.seconds = s.seconds / n;
    report.rows.push_back(row);
  }
}

} // namespace

SensitivityReport frc_sweep(const std::vector<NamedInstance>& instances,
                            const std::vector<double>& frc_values,
                            const std::vector<Algorithm>& algorithms,
                            const SolveOptions& options) {
  SensitivityReport report;
  report.parameter = "frc";
  for (const auto& named : instances) {
    if (!std::holds_alternative<VrcFrcRevenue>(named.instance.revenue_model()) ||
        std::any_of(algorithms.begin(), algorithms.end(), [&](Algorithm a) {
          return too_large(named.instance, a, options);
        })) {
      report.skipped.push_back(named.name);
      continue;
    }
    for (Algorithm algorithm : algorithms) {
      std::optional<double> previous;
      for (double frc : frc_values) {
        const auto repriced = named.instance.with_frc(frc);
        auto row = measure(named, repriced, "frc", frc, algorithm, options);
        row.non_monotone = previous && row.profit < *previous - 1e-9;
        previous = row.profit;
        report.rows.push_back(std::move(row));
      }
    }
  }
  add_averages(report);
  return report;
}

SensitivityReport size_sweep(const std::vector<NamedInstance>& instances,
                             const std::vector<Algorithm>& algorithms,
                             const SolveOptions& options) {
  SensitivityReport report;
  report.parameter = "size";
  for (const auto& named : instances) {
    if (std::any_of(algorithms.begin(), algorithms.end(), [&](Algorithm a) {
          return too_large(named.instance, a, options);
        })) {
      report.skipped.push_back(named.name);
      continue;
    }
    for (Algorithm algorithm : algorithms) {
      report.rows.push_back(measure(named,
                                    named.instance,
                                    "size",
                                    static_cast<double>(named.instance.size()),
                                    algorithm,
                                    options));
    }
  }
  add_averages(report);
  return report;
}

std::string to_csv(const SensitivityReport& report, bool with_timing) {
  std::ostringstream out;
  out << "instance,parameter,value,algorithm,size,profit,served,served_pct,"
         "workers,cpu_s,non_monotone\n";
  for (const auto& r : report.rows) {
    out << r.instance << ',' << r.parameter << ',' << fixed(r.value) << ','
        << r.algorithm << ',' << r.size << ',' << fixed(r.profit) << ','
        << r.served << ',' << fixed(r.served_pct) << ',' << r.workers << ','
        << (with_timing ? fixed(r.seconds) : std::string()) << ','
        << (r.non_monotone ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string series_csv(const SensitivityReport& report) {
  std::ostringstream out;
  out << report.parameter << ",algorithm,avg_profit,avg_served_pct,avg_workers\n";
  // Averages are recomputed with fractional workers for plotting.
  std::map<std::pair<double, std::string>, std::array<double, 4>> sums;
  for (const auto& r : report.rows) {
    if (r.instance == "AVERAGE") {
      continue;
    }
    auto& s = sums[{r.value, r.algorithm}];
    s[0] += r.profit;
    s[1] += r.served_pct;
    s[2] += static_cast<double>(r.workers);
    s[3] += 1;
  }
  for (const auto& [key, s] : sums) {
    out << fixed(key.first) << ',' << key.second << ',' << fixed(s[0] / s[3])
        << ',' << fixed(s[1] / s[3]) << ',' << fixed(s[2] / s[3]) << '\n';
  }
  return out.str();
}

} // namespace evrep
