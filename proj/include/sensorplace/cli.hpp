// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line driver: place | eval | check | gen | simulate.
//
// Exit codes: 0 ok, 2 configuration error, 3 numeric or validation error,
// 4 exhaustive enumeration over the cap, 5 a property check failed.

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sensorplace/covariance_models.hpp"
#include "sensorplace/error.hpp"
#include "sensorplace/objective.hpp"
#include "sensorplace/optimizers.hpp"
#include "sensorplace/property_suite.hpp"

namespace sensorplace::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitNumeric = 3,
  kExitTooManySubsets = 4,
  kExitCheckFailed = 5,
};

enum class Command { kPlace, kEval, kCheck, kGen, kSimulate };

// Sub-seed offsets from --seed. New consumers get new offsets.
inline constexpr std::uint64_t kStateStreamOffset = 0;
inline constexpr std::uint64_t kNoiseStreamOffset = 1;

struct RunConfig {
  Command command = Command::kPlace;
  std::optional<std::string> cov_path;
  std::optional<std::string> graph_path;
  std::optional<double> epsilon;
  std::optional<std::size_t> random_spd_n;
  std::vector<double> diag;
  double condition_cap = kDefaultConditionCap;
  double sigma2 = 1.0;
  std::size_t k = 0;
  Method method = Method::kGreedy;
  std::uint64_t seed = 1;
  std::size_t trials = 500;
  std::size_t count = 100;
  std::vector<std::size_t> indices;
  std::optional<std::string> output_path;
  unsigned threads = 1;
  bool clamp_k = false;
  bool verbose = false;
  bool corrupt_gains = false;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kKTooLarge:
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kIndexOutOfRange:
    case ErrorCode::kAlreadySelected:
    case ErrorCode::kInstanceTooSmall:
    case ErrorCode::kIo:
      return kExitConfig;
    case ErrorCode::kTooManySubsets:
      return kExitTooManySubsets;
    default:
      return kExitNumeric;
  }
}

/// Builds Σ from whichever single input source the config names.
inline CovarianceMatrix load_input(const RunConfig& cfg) {
  const int sources = int(cfg.cov_path.has_value()) + int(cfg.graph_path.has_value()) +
                      int(cfg.random_spd_n.has_value()) + int(!cfg.diag.empty());
  if (sources != 1) {
    throw ConfigError("exactly one of --cov, --graph/--gmrf, --random-spd, --diag is required");
  }
  if (cfg.cov_path) return load_covariance(*cfg.cov_path);
  if (cfg.graph_path) {
    if (!cfg.epsilon) throw ConfigError("--graph requires --epsilon");
    return gmrf_covariance(load_graph(*cfg.graph_path), *cfg.epsilon);
  }
  if (cfg.random_spd_n) return random_spd(*cfg.random_spd_n, cfg.seed, cfg.condition_cap);
  return diagonal_covariance(cfg.diag);
}

inline void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.output_path) {
    std::ofstream file(*cfg.output_path, std::ios::binary);
    if (!file) throw Error(ErrorCode::kIo, "cannot write " + *cfg.output_path);
    file << text;
  } else {
    out << text;
  }
}

inline nlohmann::ordered_json placement_json(const PlacementResult& r, std::size_t n, double sigma2,
                                             std::uint64_t seed) {
  nlohmann::ordered_json j;
  j["method"] = std::string(to_string(r.method));
  j["n"] = n;
  j["k"] = r.selected.size();
  j["sigma2"] = sigma2;
  j["selected"] = r.selected;
  j["gains"] = r.gains;
  j["objective_nats"] = r.objective;
  j["objective_bits"] = r.objective / std::log(2.0);
  j["evaluations"] = r.evaluations;
  j["elapsed_seconds"] = r.elapsed_seconds;
  j["seed"] = seed;
  return j;
}

inline nlohmann::ordered_json report_json(const CheckReport& r) {
  nlohmann::ordered_json j;
  j["check_name"] = r.check_name;
  j["trials"] = r.trials;
  j["failures"] = r.failures;
  j["worst_violation"] = r.worst_violation;
  j["seed"] = r.seed;
  j["tolerance"] = r.tolerance;
  return j;
}

inline int run_place(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.k == 0) throw ConfigError("place requires --k >= 1");
  const ObservationModel model(load_input(cfg), cfg.sigma2);
  SolverOptions opts;
  opts.clamp_k = cfg.clamp_k;
  opts.threads = cfg.threads;
  const PlacementResult r = solve(cfg.method, model, cfg.k, cfg.seed, opts);
  emit(cfg, placement_json(r, model.size(), cfg.sigma2, cfg.seed).dump(2) + "\n", out);
  if (cfg.verbose) {
    err << to_string(r.method) << ": " << r.selected.size() << " of " << model.size()
        << " nodes, I = " << r.objective << " nats after " << r.evaluations
        << " gain evaluations\n";
  }
  return kExitOk;
}

inline int run_eval(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const ObservationModel model(load_input(cfg), cfg.sigma2);
  const SensorSet s(cfg.indices);
  const double nats = evaluate(model, s);
  nlohmann::ordered_json j;
  j["n"] = model.size();
  j["sigma2"] = cfg.sigma2;
  j["selected"] = cfg.indices;
  j["objective_nats"] = nats;
  j["objective_bits"] = nats / std::log(2.0);
  emit(cfg, j.dump(2) + "\n", out);
  if (cfg.verbose) err << "I = " << nats << " nats\n";
  return kExitOk;
}

inline int run_check(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.trials == 0) throw ConfigError("--trials must be >= 1");
  RunConfig input = cfg;
  if (!input.cov_path && !input.graph_path && !input.random_spd_n && input.diag.empty()) {
    input.random_spd_n = 10;
  }
  const ObservationModel model(load_input(input), cfg.sigma2);
  SuiteConfig suite;
  suite.trials = cfg.trials;
  suite.seed = cfg.seed;
  suite.k = cfg.k == 0 ? 3 : cfg.k;

  const MutualInformationObjective objective(model);
  const std::vector<CheckReport> reports =
      cfg.corrupt_gains ? run_property_suite(NegatedGains(objective), suite)
                        : run_property_suite(objective, suite);

  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  std::size_t failures = 0;
  for (const CheckReport& r : reports) {
    arr.push_back(report_json(r));
    failures += r.failures;
    if (cfg.verbose) {
      err << r.check_name << ": " << r.failures << "/" << r.trials
          << " failures, worst slack " << r.worst_violation << "\n";
    }
  }
  emit(cfg, arr.dump(2) + "\n", out);
  return failures == 0 ? kExitOk : kExitCheckFailed;
}

inline int run_gen(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const CovarianceMatrix sigma = load_input(cfg);
  std::ostringstream text;
  write_dense_matrix(text, sigma.matrix());
  emit(cfg, text.str(), out);
  return kExitOk;
}

inline int run_simulate(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  if (cfg.count == 0) throw ConfigError("--count must be >= 1");
  const ObservationModel model(load_input(cfg), cfg.sigma2);
  const SensorSet s(cfg.indices);
  s.validate(model.size());
  const Matrix states = sample_states(model, cfg.seed + kStateStreamOffset, cfg.count);
  const Matrix obs = sample_observations(model, s, states, cfg.seed + kNoiseStreamOffset);

  std::ostringstream text;
  for (std::size_t c = 0; c < s.size(); ++c) text << (c ? "," : "") << "node_" << s[c];
  text << '\n';
  if (!s.empty()) {
    char buf[32];
    for (std::size_t r = 0; r < obs.rows(); ++r) {
      for (std::size_t c = 0; c < obs.cols(); ++c) {
        std::snprintf(buf, sizeof buf, "%.17g", obs(r, c));
        text << (c ? "," : "") << buf;
      }
      text << '\n';
    }
  }
  emit(cfg, text.str(), out);
  return kExitOk;
}

inline int dispatch(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    switch (cfg.command) {
      case Command::kPlace: return run_place(cfg, out, err);
      case Command::kEval: return run_eval(cfg, out, err);
      case Command::kCheck: return run_check(cfg, out, err);
      case Command::kGen: return run_gen(cfg, out, err);
      case Command::kSimulate: return run_simulate(cfg, out, err);
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  }
  return kExitConfig;
}

/// Parses argv and runs the chosen subcommand. argv[0] is the program name.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  CLI::App app{"Sensor placement by mutual-information maximization"};
  app.require_subcommand(1);
  RunConfig cfg;

  const std::map<std::string, Method> methods{{"greedy", Method::kGreedy},
                                              {"lazy", Method::kLazyGreedy},
                                              {"exhaustive", Method::kExhaustive},
                                              {"random", Method::kRandom}};

  auto add_input = [&](CLI::App* sub) {
    sub->add_option_function<std::string>(
        "--cov", [&](const std::string& v) { cfg.cov_path = v; }, "Dense covariance file");
    sub->add_option_function<std::string>(
        "--graph,--gmrf", [&](const std::string& v) { cfg.graph_path = v; },
        "Edge-list graph; Σ = (L + εI)⁻¹");
    sub->add_option_function<double>(
        "--epsilon", [&](double v) { cfg.epsilon = v; }, "Laplacian regularization ε > 0");
    sub->add_option_function<std::size_t>(
        "--random-spd", [&](std::size_t v) { cfg.random_spd_n = v; },
        "Random SPD covariance of this dimension (seeded by --seed)");
    sub->add_option("--diag", cfg.diag, "Diagonal covariance, comma-separated variances")
        ->delimiter(',');
    sub->add_option("--condition-cap", cfg.condition_cap, "Condition bound for --random-spd");
    sub->add_option("--seed", cfg.seed, "Root seed");
    sub->add_option("--out", cfg.output_path, "Output file (default stdout)");
    sub->add_flag("--verbose", cfg.verbose, "Human summary on stderr");
  };
  auto add_sigma2 = [&](CLI::App* sub) {
    sub->add_option("--sigma2", cfg.sigma2, "Sensor noise variance σ²");
  };
  auto add_indices = [&](CLI::App* sub) {
    sub->add_option("--indices", cfg.indices, "Sensor nodes, comma-separated")->delimiter(',');
  };

  CLI::App* place = app.add_subcommand("place", "Choose k sensor locations");
  add_input(place);
  add_sigma2(place);
  place->add_option("--k", cfg.k, "Number of sensors")->required();
  std::string method_name = "greedy";
  place->add_option("--method", method_name, "greedy | lazy | exhaustive | random")
      ->check(CLI::IsMember(methods));
  place->add_option("--threads", cfg.threads, "Workers for the greedy candidate sweep")
      ->check(CLI::PositiveNumber);
  place->add_flag("--clamp-k", cfg.clamp_k, "Clamp k to n instead of failing");

  CLI::App* eval = app.add_subcommand("eval", "Mutual information of a given sensor set");
  add_input(eval);
  add_sigma2(eval);
  add_indices(eval);

  CLI::App* check = app.add_subcommand("check", "Run the randomized property suite");
  add_input(check);
  add_sigma2(check);
  check->add_option("--trials", cfg.trials, "Trials per check");
  check->add_option("--k", cfg.k, "Sensor count for the approximation-ratio check");
  check->add_flag("--corrupt-gains", cfg.corrupt_gains)->group("");

  CLI::App* gen = app.add_subcommand("gen", "Write a covariance in dense matrix format");
  add_input(gen);

  CLI::App* simulate = app.add_subcommand("simulate", "Sample noisy sensor readings as CSV");
  add_input(simulate);
  add_sigma2(simulate);
  add_indices(simulate);
  simulate->add_option("--count", cfg.count, "Number of samples");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  cfg.method = methods.at(method_name);
  if (place->parsed()) cfg.command = Command::kPlace;
  else if (eval->parsed()) cfg.command = Command::kEval;
  else if (check->parsed()) cfg.command = Command::kCheck;
  else if (gen->parsed()) cfg.command = Command::kGen;
  else cfg.command = Command::kSimulate;
  return dispatch(cfg, out, err);
}

inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  std::vector<const char*> argv{"sensorplace"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace sensorplace::cli
