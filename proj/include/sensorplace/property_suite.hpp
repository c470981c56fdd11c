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

// Randomized numeric checks of the structural properties the solvers rely
// on: z(∅) = 0, diminishing returns, monotonicity, determinant
// superadditivity for PSD pairs, and the greedy approximation ratio against
// the exhaustive oracle.
//
// A "slack" is the signed margin by which a property holds; a trial fails
// when its slack drops below -tolerance. Trial t of a check draws from a
// generator seeded with seed + t, so reports are reproducible and trials are
// independent.

#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "sensorplace/covariance_models.hpp"
#include "sensorplace/error.hpp"
#include "sensorplace/matrix.hpp"
#include "sensorplace/objective.hpp"
#include "sensorplace/optimizers.hpp"

namespace sensorplace {

struct CheckReport {
  std::string check_name;
  std::size_t trials = 0;
  std::size_t failures = 0;
  double worst_violation = 0.0;  // smallest slack seen
  std::uint64_t seed = 0;
  double tolerance = 0.0;

  void record(double slack) {
    ++trials;
    worst_violation = trials == 1 ? slack : std::min(worst_violation, slack);
    if (slack < -tolerance) ++failures;
  }

  friend bool operator==(const CheckReport&, const CheckReport&) = default;
};

inline constexpr double kLogSlackTolerance = 1e-9;
inline constexpr double kDetRelativeTolerance = 1e-8;

/// A set function over nodes 0..size()-1 with marginal gains.
template <typename F>
concept SetObjective = requires(const F& f, const SensorSet& s, std::size_t j) {
  { f.size() } -> std::convertible_to<std::size_t>;
  { f.value(s) } -> std::convertible_to<double>;
  { f.gain(s, j) } -> std::convertible_to<double>;
};

enum class GainRoute { kSchur, kEvaluateDifference };

/// z(S) for an observation model. Gains come either from the incremental
/// Schur-complement evaluator or from two independent full evaluations.
class MutualInformationObjective {
 public:
  explicit MutualInformationObjective(ObservationModel model, GainRoute route = GainRoute::kSchur)
      : model_(std::move(model)), route_(route) {}

  std::size_t size() const { return model_.size(); }
  double value(const SensorSet& s) const { return evaluate(model_, s); }

  double gain(const SensorSet& s, std::size_t j) const {
    if (route_ == GainRoute::kEvaluateDifference) {
      return evaluate(model_, s.with(j)) - evaluate(model_, s);
    }
    GainEvaluator ev(model_);
    for (std::size_t i : s.indices()) ev = ev.commit(i);
    return ev.marginal_gain(j);
  }

 private:
  ObservationModel model_;
  GainRoute route_;
};

/// Reports the negated gains of another objective; exists to exercise the
/// failure path of the checks.
template <SetObjective F>
class NegatedGains {
 public:
  explicit NegatedGains(F inner) : inner_(std::move(inner)) {}
  std::size_t size() const { return inner_.size(); }
  double value(const SensorSet& s) const { return inner_.value(s); }
  double gain(const SensorSet& s, std::size_t j) const { return -inner_.gain(s, j); }

 private:
  F inner_;
};

namespace detail {

inline std::vector<std::size_t> random_subset(std::size_t n, std::size_t size, std::mt19937_64& rng) {
  std::vector<std::size_t> nodes(n);
  std::iota(nodes.begin(), nodes.end(), std::size_t{0});
  for (std::size_t i = 0; i < size; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(nodes[i], nodes[pick(rng)]);
  }
  nodes.resize(size);
  return nodes;
}

inline std::vector<std::size_t> random_sub_subset(const std::vector<std::size_t>& set,
                                                  std::mt19937_64& rng) {
  std::bernoulli_distribution keep(0.5);
  std::vector<std::size_t> out;
  for (std::size_t i : set)
    if (keep(rng)) out.push_back(i);
  return out;
}

struct NestedTriple {
  SensorSet s;
  SensorSet t;
  std::size_t j;
};

// |T| uniform in [2, n-1], S a uniform subset of T, j uniform outside T.
inline NestedTriple draw_nested_triple(std::size_t n, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> size_dist(2, n - 1);
  const std::size_t t_size = size_dist(rng);
  std::vector<std::size_t> perm = random_subset(n, n, rng);
  std::vector<std::size_t> t(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(t_size));
  std::uniform_int_distribution<std::size_t> outside(t_size, n - 1);
  const std::size_t j = perm[outside(rng)];
  std::vector<std::size_t> s = random_sub_subset(t, rng);
  return {SensorSet(std::move(s)), SensorSet(std::move(t)), j};
}

inline Matrix random_psd(std::size_t n, std::size_t rank, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(n, rank);
  for (std::size_t i = 0; i < n; ++i)
    for (double& v : g.row(i)) v = normal(rng);
  return gram(g);
}

inline void require_trials(std::size_t trials) {
  if (trials == 0) throw Error(ErrorCode::kInvalidArgument, "trials must be >= 1");
}

}  // namespace detail

template <SetObjective F>
CheckReport check_zero_at_empty(const F& objective) {
  CheckReport report{"zero_at_empty", 0, 0, 0.0, 0, 0.0};
  const double z = objective.value(SensorSet{});
  // Exact: anything but a literal zero is a failure.
  report.record(z == 0.0 ? 0.0 : -std::max(std::abs(z), std::numeric_limits<double>::min()));
  return report;
}

/// Slack ρ_j(S) − ρ_j(T) for each random nested triple S ⊆ T, j ∉ T.
template <SetObjective F>
std::vector<double> submodularity_slacks(const F& objective, std::size_t trials, std::uint64_t seed) {
  const std::size_t n = objective.size();
  if (n < 3) throw Error(ErrorCode::kInstanceTooSmall, "submodularity check needs n >= 3");
  std::vector<double> slacks;
  slacks.reserve(trials);
  for (std::size_t t = 0; t < trials; ++t) {
    std::mt19937_64 rng(seed + t);
    const auto triple = detail::draw_nested_triple(n, rng);
    slacks.push_back(objective.gain(triple.s, triple.j) - objective.gain(triple.t, triple.j));
  }
  return slacks;
}

template <SetObjective F>
CheckReport check_submodularity(const F& objective, std::size_t trials, std::uint64_t seed) {
  detail::require_trials(trials);
  CheckReport report{"submodularity", 0, 0, 0.0, seed, kLogSlackTolerance};
  for (double slack : submodularity_slacks(objective, trials, seed)) report.record(slack);
  return report;
}

/// Slack z(T) − z(S) for random S ⊆ T, |T| uniform in [1, n].
template <SetObjective F>
CheckReport check_monotonicity(const F& objective, std::size_t trials, std::uint64_t seed) {
  detail::require_trials(trials);
  const std::size_t n = objective.size();
  if (n < 2) throw Error(ErrorCode::kInstanceTooSmall, "monotonicity check needs n >= 2");
  CheckReport report{"monotonicity", 0, 0, 0.0, seed, kLogSlackTolerance};
  for (std::size_t t = 0; t < trials; ++t) {
    std::mt19937_64 rng(seed + t);
    std::uniform_int_distribution<std::size_t> size_dist(1, n);
    std::vector<std::size_t> big = detail::random_subset(n, size_dist(rng), rng);
    std::vector<std::size_t> small = detail::random_sub_subset(big, rng);
    report.record(objective.value(SensorSet(std::move(big))) -
                  objective.value(SensorSet(std::move(small))));
  }
  return report;
}

/// det(A+B) − det(A) − det(B) for random PSD A, B = G·Gᵀ with G n×r and
/// r uniform in [0, n], so singular and zero summands both occur. Slacks are
/// divided by max(1, det(A+B)).
inline CheckReport check_det_superadditivity(std::size_t n, std::size_t trials, std::uint64_t seed) {
  detail::require_trials(trials);
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "n must be >= 1");
  CheckReport report{"det_superadditivity", 0, 0, 0.0, seed, kDetRelativeTolerance};
  for (std::size_t t = 0; t < trials; ++t) {
    std::mt19937_64 rng(seed + t);
    std::uniform_int_distribution<std::size_t> rank(0, n);
    const Matrix a = detail::random_psd(n, rank(rng), rng);
    const Matrix b = detail::random_psd(n, rank(rng), rng);
    const double det_sum = determinant(a + b);
    const double slack = det_sum - determinant(a) - determinant(b);
    report.record(slack / std::max(1.0, det_sum));
  }
  return report;
}

inline double greedy_approximation_ratio(std::size_t k) {
  const double kk = static_cast<double>(k);
  return 1.0 - std::pow((kk - 1.0) / kk, kk);
}

/// greedy − ratio(k)·optimum on random_spd(n, seed + t) instances with σ² = 1.
inline CheckReport check_nemhauser_ratio(std::size_t n, std::size_t k, std::size_t trials,
                                         std::uint64_t seed, double noise_variance = 1.0,
                                         const SolverOptions& opts = {}) {
  detail::require_trials(trials);
  if (k == 0 || k > n) throw Error(ErrorCode::kKTooLarge, "need 1 <= k <= n");
  if (binomial(n, k) > opts.enumeration_cap) {
    throw Error(ErrorCode::kTooManySubsets,
                "C(" + std::to_string(n) + ", " + std::to_string(k) + ") exceeds enumeration cap");
  }
  CheckReport report{"nemhauser_ratio", 0, 0, 0.0, seed, kLogSlackTolerance};
  const double ratio = greedy_approximation_ratio(k);
  for (std::size_t t = 0; t < trials; ++t) {
    const ObservationModel model(random_spd(n, seed + t), noise_variance);
    const double approx = greedy(model, k, opts).objective;
    const double optimum = exhaustive(model, k, opts).objective;
    report.record(approx - ratio * optimum);
  }
  return report;
}

struct SuiteConfig {
  std::size_t trials = 500;
  std::uint64_t seed = 1;
  std::size_t k = 3;
};

/// All five checks on one instance. The superadditivity and ratio checks
/// draw their own matrices at the instance's dimension.
template <SetObjective F>
std::vector<CheckReport> run_property_suite(const F& objective, const SuiteConfig& cfg) {
  detail::require_trials(cfg.trials);
  const std::size_t n = objective.size();
  return {
      check_zero_at_empty(objective),
      check_submodularity(objective, cfg.trials, cfg.seed),
      check_monotonicity(objective, cfg.trials, cfg.seed),
      check_det_superadditivity(n, cfg.trials, cfg.seed),
      check_nemhauser_ratio(n, std::min(cfg.k, n), cfg.trials, cfg.seed),
  };
}

}  // namespace sensorplace
