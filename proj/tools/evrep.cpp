#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "evrep/bench.h"
#include "evrep/generator.h"
#include "evrep/instance_io.h"

namespace fs = std::filesystem;
using namespace evrep;

namespace {

constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kInternalError = 2;

struct Common {
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "text";
  bool no_timing = false;
};

std::vector<NamedInstance> load_directory(const std::string& dir) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<NamedInstance> out;
  for (const auto& path : files) {
    out.push_back({path.stem().string(), load_instance(path)});
  }
  if (out.empty()) {
    throw Error(ErrorKind::ParseError, "no instance files in " + dir);
  }
  return out;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
  } else {
    write_text(path, text);
  }
}

std::string format_number(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.6f", value);
  return buffer;
}

std::vector<double> parse_values(const std::string& list) {
  std::vector<double> out;
  std::stringstream in(list);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw Error(ErrorKind::ParseError, "bad value '" + item + "'");
    }
  }
  return out;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Electric vehicle relocation solver and benchmark harness"};
  app.require_subcommand(1);
  // Global flags are accepted after the subcommand name too.
  app.fallthrough();
  Common common;
  app.add_option("--seed", common.seed, "Random seed")->default_val(0);
  app.add_option("--out", common.out, "Output file or directory");
  app.add_option("--format", common.format, "Report format")
    ->check(CLI::IsMember({"text", "csv"}))
    ->default_val("text");
  app.add_flag("--no-timing", common.no_timing, "Leave wall times out of reports");

  // generate
  auto* gen = app.add_subcommand("generate", "Write a benchmark set of instances");
  std::string set_name = "amat";
  int count = 1;
  int max_pickups = 0;
  int max_deliveries = 0;
  gen->add_option("--set", set_name, "amat or vamat")->default_val("amat");
  gen->add_option("--count", count, "Number of instances")->default_val(1);
  gen->add_option("--max-pickups", max_pickups, "Cap on pickups per instance");
  gen->add_option("--max-deliveries", max_deliveries, "Cap on deliveries per instance");

  // solve
  auto* sol = app.add_subcommand("solve", "Solve one instance");
  std::string instance_path;
  std::string algorithm_name = "rh";
  std::string objective_name = "profit";
  SolveOptions options;
  bool keep_loss_routes = false;
  sol->add_option("instance", instance_path, "Instance file")->required();
  sol->add_option("--algorithm", algorithm_name, "nnh, muh, ch, rh or exact")
    ->default_val("rh");
  sol->add_option("--objective", objective_name, "profit or requests")
    ->default_val("profit");
  sol->add_option("--iterations", options.iterations, "RH iterations")
    ->default_val(10000);
  sol->add_option("--threads", options.threads, "RH threads")->default_val(1);
  sol->add_option("--max-requests", options.limits.max_requests, "Exact solver size limit")
    ->default_val(10);
  sol->add_option("--time-budget", options.limits.time_budget_seconds, "Exact solver budget in seconds")
    ->default_val(0);
  sol->add_flag("--keep-loss-routes", keep_loss_routes, "Greedy: keep routes that lose money");

  // validate
  auto* val = app.add_subcommand("validate", "Check a solution against an instance");
  std::string solution_path;
  val->add_option("instance", instance_path, "Instance file")->required();
  val->add_option("solution", solution_path, "Solution file")->required();

  // compare
  auto* cmp = app.add_subcommand("compare", "Compare algorithms on a benchmark directory");
  std::string bench_dir;
  std::string algorithm_list = "nnh,muh,ch,rh";
  std::string reference_name = "exact";
  cmp->add_option("dir", bench_dir, "Directory of instance files")->required();
  cmp->add_option("--algorithms", algorithm_list, "Comma-separated algorithms")
    ->default_val("nnh,muh,ch,rh");
  cmp->add_option("--reference", reference_name, "Reference algorithm")->default_val("exact");
  cmp->add_option("--objective", objective_name, "profit or requests")->default_val("profit");
  cmp->add_option("--iterations", options.iterations, "RH iterations")->default_val(10000);
  cmp->add_option("--max-requests", options.limits.max_requests, "Exact solver size limit")
    ->default_val(10);

  // sensitivity
  auto* sen = app.add_subcommand("sensitivity", "FRC or size sweep on a benchmark directory");
  std::string sweep = "frc";
  std::string values = "0,5,10,15,20";
  std::string sweep_algorithms = "rh";
  sen->add_option("dir", bench_dir, "Directory of instance files")->required();
  sen->add_option("--sweep", sweep, "frc or size")
    ->check(CLI::IsMember({"frc", "size"}))
    ->default_val("frc");
  sen->add_option("--values", values, "FRC values")->default_val("0,5,10,15,20");
  sen->add_option("--algorithms", sweep_algorithms, "Comma-separated algorithms")
    ->default_val("rh");
  sen->add_option("--iterations", options.iterations, "RH iterations")->default_val(10000);
  sen->add_option("--max-requests", options.limits.max_requests, "Exact solver size limit")
    ->default_val(10);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  options.seed = common.seed;
  try {
    options.objective = objective_from_string(objective_name);
    options.drop_loss_routes = !keep_loss_routes;

    if (*gen) {
      if (common.out.empty()) {
        throw Error(ErrorKind::ParseError, "--out DIR is required");
      }
      const auto set = benchmark_set_from_string(set_name);
      fs::create_directories(common.out);
      const auto instances =
        make_benchmark(set, count, common.seed, {max_pickups, max_deliveries});
      for (std::size_t i = 0; i < instances.size(); ++i) {
        char name[64];
        std::snprintf(name, sizeof name, "%s_%03zu.json", to_string(set), i);
        save_instance(instances[i], fs::path(common.out) / name);
      }
      std::cout << "wrote " << instances.size() << " instances to "
                << common.out << "\n";
      return kOk;
    }

    if (*sol) {
      const auto instance = load_instance(instance_path);
      const auto algorithm = algorithm_from_string(algorithm_name);
      SolveOutcome outcome;
      try {
        outcome = solve(instance, algorithm, options);
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::InstanceTooLarge ||
            e.kind() == ErrorKind::DegenerateConfig) {
          std::cerr << "error: " << e.what() << "\n";
          return kInputError;
        }
        throw;
      }
      const auto verdict = validate_solution(outcome.solution, instance);
      auto doc = solution_to_json(outcome.solution);
      doc["algorithm"] = to_string(algorithm);
      doc["objective"] = to_string(options.objective);
      doc["seed"] = options.seed;
      doc["iterations"] = options.iterations;
      if (algorithm == Algorithm::Exact) {
        doc["optimal"] = outcome.optimal;
      }
      doc["valid"] = verdict.ok();
      if (!common.out.empty()) {
        write_text(common.out, dump_json(doc));
      }

      const auto& s = outcome.solution;
      const double served_pct =
        instance.size() == 0 ? 0.0
                             : 100.0 * static_cast<double>(s.served.size()) /
                                 static_cast<double>(instance.size());
      if (common.format == "csv") {
        std::cout << "algorithm,objective,profit,served,served_pct,workers,"
                     "valid,optimal,cpu_s\n"
                  << to_string(algorithm) << ',' << to_string(options.objective)
                  << ',' << format_number(s.profit) << ',' << s.served.size()
                  << ',' << format_number(served_pct) << ',' << s.routes.size()
                  << ',' << (verdict.ok() ? 1 : 0) << ','
                  << (algorithm == Algorithm::Exact ? (outcome.optimal ? "1" : "0") : "")
                  << ',' << (common.no_timing ? "" : format_number(outcome.seconds))
                  << "\n";
      } else {
        std::cout << "algorithm=" << to_string(algorithm)
                  << " objective=" << to_string(options.objective)
                  << " profit=" << format_number(s.profit)
                  << " served=" << s.served.size() << "/" << instance.size()
                  << " served_pct=" << format_number(served_pct)
                  << " workers=" << s.routes.size()
                  << " valid=" << (verdict.ok() ? "yes" : "no");
        if (algorithm == Algorithm::Exact) {
          std::cout << " optimal=" << (outcome.optimal ? "yes" : "no");
        }
        if (!common.no_timing) {
          std::cout << " time=" << format_number(outcome.seconds) << "s";
        }
        std::cout << "\n";
      }
      if (!verdict.ok()) {
        std::cerr << "internal error: solver output rejected: "
                  << verdict.to_text() << "\n";
        return kInternalError;
      }
      return kOk;
    }

    if (*val) {
      const auto instance = load_instance(instance_path);
      const auto solution = solution_from_json(read_json(solution_path));
      auto verdict = validate_solution(solution, instance);
      if (verdict.ok()) {
        try {
          evaluate_profit(solution, instance);
        } catch (const Error& e) {
          verdict.violation = Violation{Condition::Accounting, -1, -1, e.what()};
        }
      }
      if (common.format == "csv") {
        std::cout << ValidationResult::csv_header() << "\n"
                  << verdict.to_csv_row(fs::path(solution_path).filename().string())
                  << "\n";
      } else {
        std::cout << verdict.to_text() << "\n";
      }
      return verdict.ok() ? kOk : kInputError;
    }

    if (*cmp) {
      const auto instances = load_directory(bench_dir);
      const auto report = compare(instances,
                                  algorithms_from_list(algorithm_list),
                                  algorithm_from_string(reference_name),
                                  options);
      for (const auto& name : report.skipped) {
        std::cerr << "warning: skipped " << name << " (exceeds oracle limits)\n";
      }
      emit(common.out, to_csv(report, !common.no_timing));
      return kOk;
    }

    if (*sen) {
      const auto instances = load_directory(bench_dir);
      const auto algorithms = algorithms_from_list(sweep_algorithms);
      const auto report = sweep == "frc"
                            ? frc_sweep(instances, parse_values(values), algorithms, options)
                            : size_sweep(instances, algorithms, options);
      for (const auto& name : report.skipped) {
        std::cerr << "warning: skipped " << name << "\n";
      }
      for (const auto& row : report.rows) {
        if (row.non_monotone) {
          std::cerr << "note: " << row.algorithm << " profit on " << row.instance
                    << " drops at " << row.parameter << "=" << row.value << "\n";
        }
      }
      emit(common.out, to_csv(report, !common.no_timing));
      if (!common.out.empty()) {
        write_text(common.out + ".series.csv", series_csv(report));
      }
      return kOk;
    }
  } catch (const InvalidInstanceError& e) {
    std::cerr << "invalid instance:\n";
    for (const auto& v : e.violations()) {
      std::cerr << "  " << v << "\n";
    }
    return kInputError;
  } catch (const Error& e) {
    const bool input = e.kind() == ErrorKind::ParseError ||
                       e.kind() == ErrorKind::InvalidInstance ||
                       e.kind() == ErrorKind::UnknownRequest ||
                       e.kind() == ErrorKind::DegenerateConfig ||
                       e.kind() == ErrorKind::InstanceTooLarge;
    std::cerr << (input ? "error: " : "internal error: ") << e.what() << "\n";
    return input ? kInputError : kInternalError;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
  return kOk;
}
