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

#include "sensorplace/spd.hpp"

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "test_support.hpp"

namespace sensorplace {
namespace {

using oracle::cofactor_determinant;
using oracle::random_spd_matrix;
using oracle::relative_error;

TEST(BuildCovariance, AcceptsSpdMatrices) {
  const CovarianceMatrix c = build_covariance(Matrix{{2, 1}, {1, 2}});
  EXPECT_EQ(c.size(), 2u);
  EXPECT_EQ(c(0, 1), 1.0);
  EXPECT_EQ(build_covariance(Matrix::identity(3)).size(), 3u);
}

TEST(BuildCovariance, RejectsIndefinite) {
  try {
    build_covariance(Matrix{{1, 2}, {2, 1}});
    FAIL() << "expected NotPositiveDefinite";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotPositiveDefinite);
    EXPECT_EQ(e.detail(), 1u);
  }
}

TEST(BuildCovariance, RejectsNonSquareAndAsymmetric) {
  EXPECT_THROW(build_covariance(Matrix(2, 3)), Error);
  try {
    build_covariance(Matrix{{2, 1}, {1.001, 2}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotSymmetric);
  }
}

TEST(BuildCovariance, AveragesTinyAsymmetry) {
  const double eps = 1e-13;
  const CovarianceMatrix c = build_covariance(Matrix{{2, 1 + eps}, {1 - eps, 2}});
  EXPECT_EQ(c(0, 1), c(1, 0));
  EXPECT_NEAR(c(0, 1), 1.0, 1e-15);
}

TEST(Cholesky, HandWorkedFactor) {
  const CholeskyFactor f = cholesky(Matrix{{4, 2}, {2, 3}});
  EXPECT_DOUBLE_EQ(f(0, 0), 2.0);
  EXPECT_DOUBLE_EQ(f(1, 0), 1.0);
  EXPECT_DOUBLE_EQ(f(1, 1), std::sqrt(2.0));
  EXPECT_EQ(f(0, 1), 0.0);
}

TEST(Cholesky, IdentityFactorsToIdentity) {
  const CholeskyFactor f = cholesky(Matrix::identity(5));
  EXPECT_EQ(f.to_dense(), Matrix::identity(5));
}

TEST(Cholesky, ZeroPivotReportsIndex) {
  try {
    cholesky(Matrix{{0, 0}, {0, 1}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotPositiveDefinite);
    EXPECT_EQ(e.detail(), 0u);
  }
}

TEST(LogDet, Examples) {
  EXPECT_NEAR(log_det(cholesky(Matrix{{4, 2}, {2, 3}})), std::log(8.0), 1e-14);
  EXPECT_NEAR(log_det(cholesky(Matrix{{4, 2}, {2, 3}})), 2.0794415, 1e-7);
  EXPECT_EQ(log_det(cholesky(Matrix::identity(4))), 0.0);
  const double e2 = std::exp(2.0);
  EXPECT_NEAR(log_det(cholesky(Matrix{{e2, 0}, {0, e2}})), 4.0, 1e-14);
}

TEST(LogDet, MatchesCofactorDeterminant) {
  std::mt19937_64 rng(11);
  for (std::size_t n = 1; n <= 6; ++n) {
    for (int rep = 0; rep < 20; ++rep) {
      const Matrix m = random_spd_matrix(n, rng);
      const double want = std::log(cofactor_determinant(m));
      EXPECT_LE(relative_error(log_det(cholesky(m)), want), 1e-8) << "n=" << n;
    }
  }
}

TEST(Cholesky, ReconstructsInput) {
  std::mt19937_64 rng(5);
  for (std::size_t n = 1; n <= 30; n += 3) {
    const Matrix m = random_spd_matrix(n, rng);
    const Matrix r = cholesky(m).reconstruct();
    EXPECT_LE((r - m).frobenius_norm() / m.frobenius_norm(), 1e-10);
  }
}

TEST(ExtendFactor, HandWorkedPivot) {
  const CholeskyFactor f = cholesky(Matrix{{3}});
  const std::vector<double> col{1.0};
  const CholeskyFactor g = extend_factor(f, col, 3.0);
  EXPECT_EQ(g.order(), 2u);
  EXPECT_NEAR(g(1, 0), 1.0 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(g(1, 1), std::sqrt(8.0 / 3.0), 1e-15);
  EXPECT_EQ(f.order(), 1u);
}

TEST(ExtendFactor, BlockDiagonalExtension) {
  const std::vector<double> zeros{0.0, 0.0};
  EXPECT_EQ(extend_factor(cholesky(Matrix::identity(2)), zeros, 1.0).to_dense(), Matrix::identity(3));
}

TEST(ExtendFactor, RejectsZeroSchurPivot) {
  const std::vector<double> col{1.0};
  try {
    extend_factor(cholesky(Matrix{{1}}), col, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotPositiveDefinite);
    EXPECT_EQ(e.detail(), 1u);
  }
}

TEST(ExtendFactor, FromEmptyFactor) {
  const CholeskyFactor g = extend_factor(CholeskyFactor{}, {}, 9.0);
  EXPECT_EQ(g.order(), 1u);
  EXPECT_EQ(g.diagonal(0), 3.0);
}

// Bordering the factor of a leading block one row at a time must reproduce
// the direct factor of the whole matrix.
TEST(ExtendFactor, AgreesWithDirectFactorization) {
  std::mt19937_64 rng(17);
  for (std::size_t n = 2; n <= 12; ++n) {
    const Matrix m = random_spd_matrix(n, rng);
    std::vector<std::size_t> lead(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) lead[i] = i;
    const CholeskyFactor base = cholesky(principal_submatrix(m, lead));
    std::vector<double> col(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) col[i] = m(n - 1, i);
    const CholeskyFactor ext = extend_factor(base, col, m(n - 1, n - 1));
    const CholeskyFactor direct = cholesky(m);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j <= i; ++j) EXPECT_NEAR(ext(i, j), direct(i, j), 1e-10);
  }
}

TEST(BlockDeterminant, Examples) {
  auto [m1, s1] = block_det_identity_check(Matrix{{3}}, Matrix{{1}}, Matrix{{1}}, Matrix{{3}});
  EXPECT_NEAR(m1, 8.0, 1e-12);
  EXPECT_NEAR(s1, 8.0, 1e-12);
  auto [m2, s2] = block_det_identity_check(Matrix::identity(2), Matrix(2, 2), Matrix(2, 2),
                                           Matrix::identity(2));
  EXPECT_EQ(m2, 1.0);
  EXPECT_EQ(s2, 1.0);
  auto [m3, s3] = block_det_identity_check(Matrix{{2}}, Matrix{{2}}, Matrix{{2}}, Matrix{{2}});
  EXPECT_NEAR(m3, 0.0, 1e-14);
  EXPECT_NEAR(s3, 0.0, 1e-14);
}

TEST(BlockDeterminant, SingularLeadingBlock) {
  try {
    block_det_identity_check(Matrix{{0}}, Matrix{{1}}, Matrix{{1}}, Matrix{{1}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSingularBlock);
  }
}

TEST(BlockDeterminant, IdentityHoldsOnRandomSpdBlocks) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + trial % 9;
    const std::size_t p = 1 + trial % (n - 1);
    const Matrix m = random_spd_matrix(n, rng);
    Matrix a(p, p), b(p, n - p), c(n - p, p), d(n - p, n - p);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (i < p && j < p) a(i, j) = m(i, j);
        else if (i < p) b(i, j - p) = m(i, j);
        else if (j < p) c(i - p, j) = m(i, j);
        else d(i - p, j - p) = m(i, j);
      }
    auto [whole, blocked] = block_det_identity_check(a, b, c, d);
    EXPECT_LE(relative_error(whole, blocked), 1e-8);
  }
}

}  // namespace
}  // namespace sensorplace
