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

// Solvers for max z(S) subject to |S| = k.
//
// Every solver breaks ties toward the lowest node index, i.e. candidates are
// ranked by the pair (gain, -index). This makes greedy, lazy greedy and the
// exhaustive oracle deterministic and directly comparable.

#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <queue>
#include <random>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "sensorplace/error.hpp"
#include "sensorplace/objective.hpp"
#include "sensorplace/spd.hpp"

namespace sensorplace {

enum class Method { kGreedy, kLazyGreedy, kExhaustive, kRandom };

constexpr std::string_view to_string(Method m) {
  switch (m) {
    case Method::kGreedy: return "greedy";
    case Method::kLazyGreedy: return "lazy_greedy";
    case Method::kExhaustive: return "exhaustive";
    case Method::kRandom: return "random";
  }
  return "unknown";
}

struct PlacementResult {
  Method method = Method::kGreedy;
  std::vector<std::size_t> selected;
  std::vector<double> gains;  // nats, one per selected node
  double objective = 0.0;     // nats
  std::size_t evaluations = 0;
  double elapsed_seconds = 0.0;
};

inline constexpr std::uint64_t kDefaultEnumerationCap = 2'000'000;

struct SolverOptions {
  bool clamp_k = false;
  // Worker threads for the per-step candidate sweep in greedy(); results do
  // not depend on this.
  unsigned threads = 1;
  std::uint64_t enumeration_cap = kDefaultEnumerationCap;
};

namespace detail {

inline std::size_t resolve_k(std::size_t n, std::size_t k, const SolverOptions& opts) {
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
  if (k > n) {
    if (!opts.clamp_k) {
      throw Error(ErrorCode::kKTooLarge,
                  "k = " + std::to_string(k) + " exceeds n = " + std::to_string(n));
    }
    return n;
  }
  return k;
}

// (gain, -index) ordering.
inline bool ranks_above(double gain_a, std::size_t idx_a, double gain_b, std::size_t idx_b) {
  if (gain_a != gain_b) return gain_a > gain_b;
  return idx_a < idx_b;
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

struct Candidate {
  double gain = -std::numeric_limits<double>::infinity();
  std::size_t index = std::numeric_limits<std::size_t>::max();
};

inline Candidate best_in_range(const GainEvaluator& ev, std::size_t lo, std::size_t hi) {
  Candidate best;
  for (std::size_t j = lo; j < hi; ++j) {
    if (ev.is_selected(j)) continue;
    const double g = ev.marginal_gain(j);
    if (best.index == std::numeric_limits<std::size_t>::max() ||
        ranks_above(g, j, best.gain, best.index)) {
      best = {g, j};
    }
  }
  return best;
}

inline Candidate best_candidate(const GainEvaluator& ev, unsigned threads) {
  const std::size_t n = ev.model().size();
  if (threads <= 1 || n < 2 * threads) return best_in_range(ev, 0, n);
  std::vector<Candidate> partial(threads);
  std::vector<std::thread> workers;
  const std::size_t chunk = (n + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t lo = std::min(n, t * chunk);
    const std::size_t hi = std::min(n, lo + chunk);
    workers.emplace_back([&, t, lo, hi] { partial[t] = best_in_range(ev, lo, hi); });
  }
  for (auto& w : workers) w.join();
  Candidate best;
  for (const Candidate& c : partial) {
    if (c.index == std::numeric_limits<std::size_t>::max()) continue;
    if (best.index == std::numeric_limits<std::size_t>::max() ||
        ranks_above(c.gain, c.index, best.gain, best.index)) {
      best = c;
    }
  }
  return best;
}

}  // namespace detail

/// Plain greedy: every step scores every unselected node.
inline PlacementResult greedy(const ObservationModel& model, std::size_t k,
                              const SolverOptions& opts = {}) {
  detail::Stopwatch clock;
  const std::size_t n = model.size();
  k = detail::resolve_k(n, k, opts);
  PlacementResult result;
  result.method = Method::kGreedy;
  GainEvaluator ev(model);
  for (std::size_t step = 0; step < k; ++step) {
    const detail::Candidate best = detail::best_candidate(ev, opts.threads);
    result.evaluations += n - step;
    ev = ev.commit(best.index);
    result.selected.push_back(best.index);
    result.gains.push_back(best.gain);
  }
  result.objective = ev.objective_value();
  result.elapsed_seconds = clock.seconds();
  return result;
}

/// CELF lazy greedy. Cached gains from earlier (smaller) selections are
/// upper bounds on current gains by diminishing returns, so only the queue
/// head ever needs refreshing. Selects exactly what greedy() selects.
inline PlacementResult lazy_greedy(const ObservationModel& model, std::size_t k,
                                   const SolverOptions& opts = {}) {
  detail::Stopwatch clock;
  const std::size_t n = model.size();
  k = detail::resolve_k(n, k, opts);
  PlacementResult result;
  result.method = Method::kLazyGreedy;

  struct Entry {
    double gain;
    std::size_t index;
    std::size_t computed_at;  // |S| when gain was computed
  };
  auto lower_priority = [](const Entry& a, const Entry& b) {
    return detail::ranks_above(b.gain, b.index, a.gain, a.index);
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(lower_priority)> queue(lower_priority);

  GainEvaluator ev(model);
  for (std::size_t j = 0; j < n; ++j) {
    queue.push({ev.marginal_gain(j), j, 0});
    ++result.evaluations;
  }

  while (result.selected.size() < k) {
    Entry top = queue.top();
    queue.pop();
    const std::size_t s = result.selected.size();
    if (top.computed_at != s) {
      top.gain = ev.marginal_gain(top.index);
      top.computed_at = s;
      ++result.evaluations;
      if (!queue.empty() && !detail::ranks_above(top.gain, top.index, queue.top().gain,
                                                 queue.top().index)) {
        queue.push(top);
        continue;
      }
    }
    ev = ev.commit(top.index);
    result.selected.push_back(top.index);
    result.gains.push_back(top.gain);
  }
  result.objective = ev.objective_value();
  result.elapsed_seconds = clock.seconds();
  return result;
}

/// C(n, k), saturating at UINT64_MAX.
inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // r·(n-k+i)/i stays integral at every step.
    const std::uint64_t num = n - k + i;
    const std::uint64_t g = std::gcd(r, i);
    const std::uint64_t r1 = r / g;
    const std::uint64_t i1 = i / g;
    const std::uint64_t num1 = num / i1;
    if (r1 != 0 && num1 > std::numeric_limits<std::uint64_t>::max() / r1) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    r = r1 * num1;
  }
  return r;
}

/// Exact optimum by enumerating every k-subset in lexicographic order,
/// bordering Cholesky factors along the recursion so each subset costs one
/// Schur pivot. Ties keep the lexicographically first subset.
inline PlacementResult exhaustive(const ObservationModel& model, std::size_t k,
                                  const SolverOptions& opts = {}) {
  detail::Stopwatch clock;
  const std::size_t n = model.size();
  k = detail::resolve_k(n, k, opts);
  const std::uint64_t subsets = binomial(n, k);
  if (subsets > opts.enumeration_cap) {
    throw Error(ErrorCode::kTooManySubsets,
                "C(" + std::to_string(n) + ", " + std::to_string(k) + ") = " +
                    (subsets == std::numeric_limits<std::uint64_t>::max()
                         ? std::string("overflow")
                         : std::to_string(subsets)) +
                    " exceeds cap " + std::to_string(opts.enumeration_cap));
  }

  PlacementResult result;
  result.method = Method::kExhaustive;
  double best_value = -std::numeric_limits<double>::infinity();
  std::vector<std::size_t> best;
  std::vector<std::size_t> current;
  current.reserve(k);

  // stack of evaluators: depth d holds the set current[0..d).
  std::vector<GainEvaluator> stack;
  stack.reserve(k + 1);
  stack.emplace_back(model);

  auto recurse = [&](auto&& self, std::size_t start) -> void {
    const std::size_t depth = current.size();
    if (depth == k) {
      ++result.evaluations;
      const double value = stack.back().objective_value();
      if (value > best_value) {
        best_value = value;
        best = current;
      }
      return;
    }
    for (std::size_t j = start; j + (k - depth) <= n; ++j) {
      current.push_back(j);
      stack.push_back(stack.back().commit(j));
      self(self, j + 1);
      stack.pop_back();
      current.pop_back();
    }
  };
  recurse(recurse, 0);

  // Gains are reported along the greedy order inside the winning subset.
  GainEvaluator ev(model);
  std::vector<std::size_t> remaining = best;
  while (!remaining.empty()) {
    std::size_t pick = 0;
    double pick_gain = ev.marginal_gain(remaining[0]);
    for (std::size_t r = 1; r < remaining.size(); ++r) {
      const double g = ev.marginal_gain(remaining[r]);
      if (detail::ranks_above(g, remaining[r], pick_gain, remaining[pick])) {
        pick = r;
        pick_gain = g;
      }
    }
    ev = ev.commit(remaining[pick]);
    result.gains.push_back(pick_gain);
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  result.selected = std::move(best);
  result.objective = ev.objective_value();
  result.elapsed_seconds = clock.seconds();
  return result;
}

/// Uniform random k-subset (partial Fisher–Yates), scored exactly. Gains are
/// reported in the drawn order.
inline PlacementResult random_placement(const ObservationModel& model, std::size_t k,
                                        std::uint64_t seed, const SolverOptions& opts = {}) {
  detail::Stopwatch clock;
  const std::size_t n = model.size();
  k = detail::resolve_k(n, k, opts);
  std::vector<std::size_t> nodes(n);
  std::iota(nodes.begin(), nodes.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(nodes[i], nodes[pick(rng)]);
  }
  PlacementResult result;
  result.method = Method::kRandom;
  GainEvaluator ev(model);
  for (std::size_t i = 0; i < k; ++i) {
    const double g = ev.marginal_gain(nodes[i]);
    ++result.evaluations;
    ev = ev.commit(nodes[i]);
    result.selected.push_back(nodes[i]);
    result.gains.push_back(g);
  }
  result.objective = ev.objective_value();
  result.elapsed_seconds = clock.seconds();
  return result;
}

inline PlacementResult solve(Method method, const ObservationModel& model, std::size_t k,
                             std::uint64_t seed, const SolverOptions& opts = {}) {
  switch (method) {
    case Method::kGreedy: return greedy(model, k, opts);
    case Method::kLazyGreedy: return lazy_greedy(model, k, opts);
    case Method::kExhaustive: return exhaustive(model, k, opts);
    case Method::kRandom: return random_placement(model, k, seed, opts);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown method");
}

}  // namespace sensorplace
