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

// Mutual information between the network state X ~ N(0, Σ) and the noisy
// readings Y = H·X + Z of a sensor set S:
//
//   z(S) = ½ ln( det(Σ_SS + σ²I) / σ^{2|S|} )     (nats)
//
// The marginal gain of node j on top of S is the scalar Schur complement
//
//   ρ_j(S) = ½ ln( (Σ_jj + σ² − Σ_jS (Σ_SS + σ²I)⁻¹ Σ_Sj) / σ² )
//
// which GainEvaluator answers in O(|S|²) from a cached Cholesky factor.

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sensorplace/error.hpp"
#include "sensorplace/matrix.hpp"
#include "sensorplace/spd.hpp"

namespace sensorplace {

inline constexpr double kNoiseVarianceFloor = 1e-9;

/// Ordered set of distinct node indices; order records selection sequence.
class SensorSet {
 public:
  SensorSet() = default;
  explicit SensorSet(std::vector<std::size_t> indices) : indices_(std::move(indices)) {
    for (std::size_t a = 0; a < indices_.size(); ++a)
      for (std::size_t b = a + 1; b < indices_.size(); ++b)
        if (indices_[a] == indices_[b]) {
          throw Error(ErrorCode::kInvalidArgument,
                      "duplicate index " + std::to_string(indices_[a]) + " in sensor set",
                      indices_[a]);
        }
  }

  std::size_t size() const noexcept { return indices_.size(); }
  bool empty() const noexcept { return indices_.empty(); }
  std::span<const std::size_t> indices() const noexcept { return indices_; }
  std::size_t operator[](std::size_t i) const { return indices_[i]; }

  bool contains(std::size_t j) const {
    for (std::size_t i : indices_)
      if (i == j) return true;
    return false;
  }

  void validate(std::size_t n) const {
    for (std::size_t i : indices_)
      if (i >= n) {
        throw Error(ErrorCode::kIndexOutOfRange,
                    "index " + std::to_string(i) + " outside [0, " + std::to_string(n) + ")",
                    i);
      }
  }

  SensorSet with(std::size_t j) const {
    if (contains(j)) {
      throw Error(ErrorCode::kAlreadySelected, "index " + std::to_string(j) + " already selected", j);
    }
    SensorSet out = *this;
    out.indices_.push_back(j);
    return out;
  }

  friend bool operator==(const SensorSet&, const SensorSet&) = default;

 private:
  std::vector<std::size_t> indices_;
};

/// Σ together with the per-sensor noise variance σ² (white, shared by all
/// sensors). The state mean is taken as zero.
class ObservationModel {
 public:
  ObservationModel(CovarianceMatrix covariance, double noise_variance)
      : covariance_(std::move(covariance)), noise_variance_(noise_variance) {
    if (!(noise_variance >= kNoiseVarianceFloor) || !std::isfinite(noise_variance)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "noise variance must be >= 1e-9, got " + std::to_string(noise_variance));
    }
  }

  const CovarianceMatrix& covariance() const noexcept { return covariance_; }
  double noise_variance() const noexcept { return noise_variance_; }
  std::size_t size() const noexcept { return covariance_.size(); }

 private:
  CovarianceMatrix covariance_;
  double noise_variance_;
};

/// z(S) from scratch. Returns literal 0.0 for the empty set.
inline double evaluate(const ObservationModel& model, const SensorSet& s) {
  s.validate(model.size());
  if (s.empty()) return 0.0;
  Matrix sub = principal_submatrix(model.covariance().matrix(), s.indices());
  const double sigma2 = model.noise_variance();
  for (std::size_t i = 0; i < sub.rows(); ++i) sub(i, i) += sigma2;
  const CholeskyFactor f = cholesky(sub);
  return 0.5 * (log_det(f) - static_cast<double>(s.size()) * std::log(sigma2));
}

/// Incremental state for greedy selection: the current set, the factor of
/// Σ_SS + σ²I and z(S). Immutable; commit() returns a new evaluator, so one
/// instance can serve gain queries from many threads.
class GainEvaluator {
 public:
  explicit GainEvaluator(ObservationModel model)
      : model_(std::move(model)), selected_(model_.size(), 0) {}

  const ObservationModel& model() const noexcept { return model_; }
  const SensorSet& selection() const noexcept { return selection_; }
  const CholeskyFactor& factor() const noexcept { return factor_; }
  double objective_value() const noexcept { return objective_; }
  bool is_selected(std::size_t j) const { return j < selected_.size() && selected_[j]; }

  /// ρ_j(S) in nats; does not modify the evaluator.
  double marginal_gain(std::size_t j) const {
    check_candidate(j);
    const std::vector<double> c = cross_covariance(j);
    const std::vector<double> w = factor_.forward_solve(c);
    double schur = model_.covariance()(j, j) + model_.noise_variance();
    for (double v : w) schur -= v * v;
    return 0.5 * std::log(schur / model_.noise_variance());
  }

  GainEvaluator commit(std::size_t j) const {
    const double gain = marginal_gain(j);
    GainEvaluator next = *this;
    next.factor_ = extend_factor(factor_, cross_covariance(j),
                                 model_.covariance()(j, j) + model_.noise_variance());
    next.selection_ = selection_.with(j);
    next.selected_[j] = 1;
    next.objective_ += gain;
    return next;
  }

 private:
  void check_candidate(std::size_t j) const {
    if (j >= model_.size()) {
      throw Error(ErrorCode::kIndexOutOfRange,
                  "index " + std::to_string(j) + " outside [0, " +
                      std::to_string(model_.size()) + ")",
                  j);
    }
    if (selected_[j]) {
      throw Error(ErrorCode::kAlreadySelected, "index " + std::to_string(j) + " already selected", j);
    }
  }

  // Σ_Sj in selection order.
  std::vector<double> cross_covariance(std::size_t j) const {
    auto row = model_.covariance().row(j);
    std::vector<double> c(selection_.size());
    for (std::size_t i = 0; i < selection_.size(); ++i) c[i] = row[selection_[i]];
    return c;
  }

  ObservationModel model_;
  SensorSet selection_;
  CholeskyFactor factor_;
  std::vector<char> selected_;
  double objective_ = 0.0;
};

/// `count` i.i.d. rows X ~ N(0, Σ), each generated as L·g.
inline Matrix sample_states(const ObservationModel& model, std::uint64_t seed, std::size_t count) {
  if (count == 0) throw Error(ErrorCode::kInvalidArgument, "sample count must be >= 1");
  const std::size_t n = model.size();
  const CholeskyFactor& l = model.covariance().factor();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix out(count, n);
  std::vector<double> g(n);
  for (std::size_t r = 0; r < count; ++r) {
    for (double& v : g) v = normal(rng);
    auto dst = out.row(r);
    for (std::size_t i = 0; i < n; ++i) {
      auto li = l.row(i);
      double s = 0.0;
      for (std::size_t m = 0; m <= i; ++m) s += li[m] * g[m];
      dst[i] = s;
    }
  }
  return out;
}

/// Y = H·X + Z for each state row: picks the columns of `states` named by
/// `s` and adds N(0, σ²) noise.
inline Matrix sample_observations(const ObservationModel& model, const SensorSet& s,
                                  const Matrix& states, std::uint64_t seed) {
  if (states.cols() != model.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "states have " + std::to_string(states.cols()) + " columns, model has " +
                    std::to_string(model.size()));
  }
  s.validate(model.size());
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, std::sqrt(model.noise_variance()));
  Matrix out(states.rows(), s.size());
  for (std::size_t r = 0; r < states.rows(); ++r)
    for (std::size_t c = 0; c < s.size(); ++c) out(r, c) = states(r, s[c]) + noise(rng);
  return out;
}

}  // namespace sensorplace
