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

// Symmetric positive-definite substrate: packed Cholesky factors that can be
// bordered by one row at a time, and the validated covariance type every
// objective evaluation runs on.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sensorplace/error.hpp"
#include "sensorplace/matrix.hpp"

namespace sensorplace {

/// Pivots at or below this are treated as a loss of positive definiteness.
inline double pivot_tolerance(double max_diagonal) {
  return 1e-12 * std::max(1.0, max_diagonal);
}

/// Lower-triangular Cholesky factor stored row-packed, so appending a
/// bordering row is a push onto the storage and every row is contiguous for
/// forward substitution.
class CholeskyFactor {
 public:
  CholeskyFactor() = default;

  std::size_t order() const noexcept { return order_; }

  double operator()(std::size_t i, std::size_t j) const {
    return j > i ? 0.0 : packed_[offset(i) + j];
  }
  double diagonal(std::size_t i) const { return packed_[offset(i) + i]; }

  std::span<const double> row(std::size_t i) const {
    return {packed_.data() + offset(i), i + 1};
  }

  /// Largest diagonal entry of the factored matrix (not of the factor); the
  /// pivot tolerance for later extensions scales with it.
  double max_matrix_diagonal() const noexcept { return max_matrix_diagonal_; }

  /// Solves L·w = b by forward substitution.
  std::vector<double> forward_solve(std::span<const double> b) const {
    if (b.size() != order_) {
      throw Error(ErrorCode::kDimensionMismatch, "forward solve length mismatch");
    }
    std::vector<double> w(order_);
    for (std::size_t i = 0; i < order_; ++i) {
      const double* li = packed_.data() + offset(i);
      double s = b[i];
      for (std::size_t m = 0; m < i; ++m) s -= li[m] * w[m];
      w[i] = s / li[i];
    }
    return w;
  }

  Matrix to_dense() const {
    Matrix m(order_, order_);
    for (std::size_t i = 0; i < order_; ++i)
      for (std::size_t j = 0; j <= i; ++j) m(i, j) = (*this)(i, j);
    return m;
  }

  /// L·Lᵀ.
  Matrix reconstruct() const {
    Matrix m(order_, order_);
    for (std::size_t i = 0; i < order_; ++i) {
      for (std::size_t j = 0; j <= i; ++j) {
        auto ri = row(i);
        auto rj = row(j);
        double s = 0.0;
        for (std::size_t k = 0; k <= j; ++k) s += ri[k] * rj[k];
        m(i, j) = s;
        m(j, i) = s;
      }
    }
    return m;
  }

 private:
  friend CholeskyFactor cholesky(const Matrix& m);
  friend CholeskyFactor extend_factor(const CholeskyFactor& f,
                                      std::span<const double> new_column,
                                      double new_diagonal);

  static std::size_t offset(std::size_t i) noexcept { return i * (i + 1) / 2; }

  std::size_t order_ = 0;
  double max_matrix_diagonal_ = 0.0;
  std::vector<double> packed_;
};

/// Cholesky factorization of a symmetric matrix; only the lower triangle is
/// read. Throws kNotPositiveDefinite with the failing pivot index.
inline CholeskyFactor cholesky(const Matrix& m) {
  if (!m.square()) throw Error(ErrorCode::kNotSquare, "cholesky of non-square matrix");
  const std::size_t n = m.rows();
  CholeskyFactor f;
  f.order_ = n;
  f.packed_.resize(n * (n + 1) / 2);
  double max_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, m(i, i));
  f.max_matrix_diagonal_ = max_diag;
  const double tol = pivot_tolerance(max_diag);

  for (std::size_t i = 0; i < n; ++i) {
    double* li = f.packed_.data() + CholeskyFactor::offset(i);
    auto mi = m.row(i);
    for (std::size_t j = 0; j < i; ++j) {
      const double* lj = f.packed_.data() + CholeskyFactor::offset(j);
      double s = mi[j];
      for (std::size_t k = 0; k < j; ++k) s -= li[k] * lj[k];
      li[j] = s / lj[j];
    }
    double d = mi[i];
    for (std::size_t k = 0; k < i; ++k) d -= li[k] * li[k];
    if (!(d > tol)) {
      throw Error(ErrorCode::kNotPositiveDefinite,
                  "pivot " + std::to_string(i) + " is " + std::to_string(d), i);
    }
    li[i] = std::sqrt(d);
  }
  return f;
}

/// ln det of the factored matrix, 2·Σ ln L_ii.
inline double log_det(const CholeskyFactor& f) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.order(); ++i) s += std::log(f.diagonal(i));
  return 2.0 * s;
}

/// Factor of the bordered matrix [[M, c], [cᵀ, d]] given the factor of M.
/// The new pivot is the scalar Schur complement d − cᵀM⁻¹c = d − ‖w‖² with
/// L·w = c. The input factor is left untouched.
inline CholeskyFactor extend_factor(const CholeskyFactor& f,
                                    std::span<const double> new_column,
                                    double new_diagonal) {
  std::vector<double> w = f.forward_solve(new_column);
  double schur = new_diagonal;
  for (double v : w) schur -= v * v;
  const double max_diag = std::max(f.max_matrix_diagonal_, new_diagonal);
  if (!(schur > pivot_tolerance(max_diag))) {
    throw Error(ErrorCode::kNotPositiveDefinite,
                "bordering pivot " + std::to_string(f.order()) + " is " +
                    std::to_string(schur),
                f.order());
  }
  CholeskyFactor out;
  out.order_ = f.order_ + 1;
  out.max_matrix_diagonal_ = max_diag;
  out.packed_.reserve(out.order_ * (out.order_ + 1) / 2);
  out.packed_ = f.packed_;
  out.packed_.insert(out.packed_.end(), w.begin(), w.end());
  out.packed_.push_back(std::sqrt(schur));
  return out;
}

/// Both sides of the block determinant identity for M = [[A, B], [C, D]]:
/// returns (det M, det A · det(D − C·A⁻¹·B)). Test support.
inline std::pair<double, double> block_det_identity_check(const Matrix& a,
                                                          const Matrix& b,
                                                          const Matrix& c,
                                                          const Matrix& d) {
  if (!a.square() || !d.square() || b.rows() != a.rows() || b.cols() != d.cols() ||
      c.rows() != d.rows() || c.cols() != a.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "blocks do not assemble to a square matrix");
  }
  const std::size_t p = a.rows();
  const std::size_t q = d.rows();
  Matrix m(p + q, p + q);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < p; ++j) m(i, j) = a(i, j);
    for (std::size_t j = 0; j < q; ++j) m(i, p + j) = b(i, j);
  }
  for (std::size_t i = 0; i < q; ++i) {
    for (std::size_t j = 0; j < p; ++j) m(p + i, j) = c(i, j);
    for (std::size_t j = 0; j < q; ++j) m(p + i, p + j) = d(i, j);
  }

  LuFactor lu_a(a);
  if (p > 0 && lu_a.min_abs_pivot() <= 1e-12 * std::max(1.0, a.max_abs())) {
    throw Error(ErrorCode::kSingularBlock, "leading block A is numerically singular");
  }
  const Matrix schur = d - c * (p > 0 ? lu_a.solve(b) : Matrix(0, q));
  const double det_a = p > 0 ? lu_a.determinant() : 1.0;
  return {determinant(m), det_a * determinant(schur)};
}

/// Validated, immutable state covariance Σ. Storage and its Cholesky factor
/// are shared between copies.
class CovarianceMatrix {
 public:
  std::size_t size() const noexcept { return state_->entries.rows(); }
  double operator()(std::size_t i, std::size_t j) const { return state_->entries(i, j); }
  std::span<const double> row(std::size_t i) const { return state_->entries.row(i); }
  const Matrix& matrix() const noexcept { return state_->entries; }
  const CholeskyFactor& factor() const noexcept { return state_->factor; }

 private:
  struct State {
    Matrix entries;
    CholeskyFactor factor;
  };
  friend CovarianceMatrix build_covariance(Matrix entries);

  explicit CovarianceMatrix(std::shared_ptr<const State> s) : state_(std::move(s)) {}

  std::shared_ptr<const State> state_;
};

/// Symmetrizes by averaging and validates positive definiteness with a trial
/// factorization. Asymmetry above 1e-12·max|a| is rejected rather than
/// averaged away.
inline CovarianceMatrix build_covariance(Matrix entries) {
  if (!entries.square()) throw Error(ErrorCode::kNotSquare, "covariance must be square");
  const std::size_t n = entries.rows();
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "covariance must have n >= 1");
  const double scale = entries.max_abs();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double aij = entries(i, j);
      const double aji = entries(j, i);
      if (!std::isfinite(aij) || !std::isfinite(aji) ||
          std::abs(aij - aji) > 1e-12 * scale) {
        throw Error(ErrorCode::kNotSymmetric,
                    "entries (" + std::to_string(i) + "," + std::to_string(j) + ") differ");
      }
      const double avg = 0.5 * (aij + aji);
      entries(i, j) = avg;
      entries(j, i) = avg;
    }
  }
  CholeskyFactor f = cholesky(entries);
  auto state = std::make_shared<CovarianceMatrix::State>();
  state->entries = std::move(entries);
  state->factor = std::move(f);
  return CovarianceMatrix(std::move(state));
}

}  // namespace sensorplace
