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

#include "sensorplace/property_suite.hpp"

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "sensorplace/covariance_models.hpp"

namespace sensorplace {
namespace {

ObservationModel two_node_model() {
  return ObservationModel(build_covariance(Matrix{{2, 1}, {1, 2}}), 1.0);
}

TEST(CheckZeroAtEmpty, AllGenerators) {
  for (const auto& m : {two_node_model(), ObservationModel(random_spd(1, 3), 0.1),
                        ObservationModel(gmrf_covariance(path_graph(6), 0.5), 2.0)}) {
    const CheckReport r = check_zero_at_empty(MutualInformationObjective(m));
    EXPECT_EQ(r.failures, 0u);
    EXPECT_EQ(r.worst_violation, 0.0);
    EXPECT_EQ(r.trials, 1u);
  }
}

TEST(Submodularity, HandWorkedSlack) {
  const MutualInformationObjective f(two_node_model());
  const double slack = f.gain(SensorSet{}, 1) - f.gain(SensorSet({0}), 1);
  EXPECT_NEAR(slack, 0.5 * std::log(3.0) - 0.5 * std::log(8.0 / 3.0), 1e-15);
  EXPECT_NEAR(slack, 0.0588915, 1e-7);
}

TEST(Submodularity, DiagonalSlacksVanish) {
  const std::vector<double> v{1, 2, 3, 4, 5};
  const MutualInformationObjective f(ObservationModel(diagonal_covariance(v), 0.5));
  for (double s : submodularity_slacks(f, 100, 4)) EXPECT_EQ(s, 0.0);
}

TEST(Submodularity, RandomSpdHasNoViolations) {
  const CheckReport r =
      check_submodularity(MutualInformationObjective(ObservationModel(random_spd(10, 2), 1.0)), 500, 1);
  EXPECT_EQ(r.trials, 500u);
  EXPECT_EQ(r.failures, 0u);
  EXPECT_GE(r.worst_violation, -1e-9);
  EXPECT_EQ(r.tolerance, 1e-9);
}

TEST(Submodularity, SchurAndDifferenceRoutesAgree) {
  const ObservationModel m(random_spd(10, 8), 0.7);
  const auto schur = submodularity_slacks(MutualInformationObjective(m, GainRoute::kSchur), 300, 5);
  const auto diff =
      submodularity_slacks(MutualInformationObjective(m, GainRoute::kEvaluateDifference), 300, 5);
  ASSERT_EQ(schur.size(), diff.size());
  for (std::size_t i = 0; i < schur.size(); ++i) EXPECT_NEAR(schur[i], diff[i], 1e-9);
}

TEST(Submodularity, TooSmall) {
  try {
    check_submodularity(MutualInformationObjective(two_node_model()), 10, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInstanceTooSmall);
  }
}

TEST(Submodularity, NegatedGainsAreCaught) {
  const MutualInformationObjective f(ObservationModel(random_spd(10, 2), 1.0));
  const CheckReport r = check_submodularity(NegatedGains(f), 200, 1);
  EXPECT_GT(r.failures, 0u);
  EXPECT_LT(r.worst_violation, -1e-9);
}

TEST(Monotonicity, HandWorkedAndRandom) {
  const MutualInformationObjective f(two_node_model());
  EXPECT_GT(f.value(SensorSet({0, 1})) - f.value(SensorSet({0})), 0.0);
  const CheckReport small = check_monotonicity(f, 50, 3);
  EXPECT_EQ(small.failures, 0u);

  const CheckReport r = check_monotonicity(
      MutualInformationObjective(ObservationModel(gmrf_covariance(path_graph(10), 0.5), 1.0)), 500, 1);
  EXPECT_EQ(r.failures, 0u);
  EXPECT_GE(r.worst_violation, 0.0);
}

TEST(Monotonicity, TooSmall) {
  const MutualInformationObjective f(ObservationModel(random_spd(1, 1), 1.0));
  EXPECT_THROW(check_monotonicity(f, 5, 1), Error);
}

TEST(DetSuperadditivity, HandWorkedPairs) {
  const Matrix i2 = Matrix::identity(2);
  EXPECT_EQ(determinant(i2 + i2) - 2 * determinant(i2), 2.0);
  const Matrix zero(2, 2);
  EXPECT_EQ(determinant(i2 + zero) - determinant(i2) - determinant(zero), 0.0);
  const Matrix a{{1, 0}, {0, 0}}, b{{0, 0}, {0, 1}};
  EXPECT_EQ(determinant(a + b) - determinant(a) - determinant(b), 1.0);
}

TEST(DetSuperadditivity, RandomPairs) {
  for (std::size_t n : {1u, 3u, 6u, 10u}) {
    const CheckReport r = check_det_superadditivity(n, 200, 17);
    EXPECT_EQ(r.failures, 0u) << n;
    EXPECT_EQ(r.tolerance, 1e-8);
  }
}

TEST(NemhauserRatio, Ratios) {
  EXPECT_EQ(greedy_approximation_ratio(1), 1.0);
  EXPECT_EQ(greedy_approximation_ratio(2), 0.75);
  EXPECT_NEAR(greedy_approximation_ratio(1000), 1 - std::exp(-1.0), 1e-3);
}

TEST(NemhauserRatio, KOneIsExact) {
  const CheckReport r = check_nemhauser_ratio(8, 1, 30, 4);
  EXPECT_EQ(r.failures, 0u);
  EXPECT_GE(r.worst_violation, -1e-9);
}

TEST(NemhauserRatio, RandomInstances) {
  const CheckReport r = check_nemhauser_ratio(10, 3, 100, 1);
  EXPECT_EQ(r.failures, 0u);
  EXPECT_EQ(r.trials, 100u);
}

TEST(NemhauserRatio, TooManySubsets) {
  try {
    check_nemhauser_ratio(30, 15, 1, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTooManySubsets);
  }
}

TEST(Suite, ReproducibleReports) {
  const MutualInformationObjective f(ObservationModel(random_spd(8, 6), 1.0));
  SuiteConfig cfg;
  cfg.trials = 40;
  cfg.seed = 9;
  const auto a = run_property_suite(f, cfg);
  const auto b = run_property_suite(f, cfg);
  ASSERT_EQ(a.size(), 5u);
  EXPECT_EQ(a, b);
  for (const auto& r : a) EXPECT_EQ(r.failures, 0u) << r.check_name;
}

TEST(Suite, ZeroTrialsRejected) {
  const MutualInformationObjective f(ObservationModel(random_spd(8, 6), 1.0));
  SuiteConfig cfg;
  cfg.trials = 0;
  EXPECT_THROW(run_property_suite(f, cfg), Error);
}

}  // namespace
}  // namespace sensorplace
