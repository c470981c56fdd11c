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

#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "sensorplace/error.hpp"

namespace sensorplace {

/// Dense row-major real matrix. Deliberately small: only what the
/// sensor-placement routines need.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  Matrix(std::initializer_list<std::initializer_list<double>> init)
      : rows_(init.size()), cols_(init.size() ? init.begin()->size() : 0) {
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) {
        throw Error(ErrorCode::kDimensionMismatch, "ragged initializer list");
      }
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static Matrix diagonal(std::span<const double> values) {
    Matrix m(values.size(), values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) {
    assert(i < rows_ && j < cols_);
    return data_[i * cols_ + j];
  }
  double operator()(std::size_t i, std::size_t j) const {
    assert(i < rows_ && j < cols_);
    return data_[i * cols_ + j];
  }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }

  std::span<const double> data() const noexcept { return data_; }

  Matrix transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (double v : data_) s += v * v;
    return std::sqrt(s);
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

inline Matrix operator+(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "matrix sum shape mismatch");
  }
  Matrix r = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) += b(i, j);
  return r;
}

inline Matrix operator-(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "matrix difference shape mismatch");
  }
  Matrix r = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) -= b(i, j);
  return r;
}

inline Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorCode::kDimensionMismatch, "matrix product shape mismatch");
  }
  Matrix r(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto out = r.row(i);
    for (std::size_t m = 0; m < a.cols(); ++m) {
      const double aim = a(i, m);
      if (aim == 0.0) continue;
      auto brow = b.row(m);
      for (std::size_t j = 0; j < b.cols(); ++j) out[j] += aim * brow[j];
    }
  }
  return r;
}

/// G·Gᵀ, computed on the upper triangle and mirrored so the result is
/// exactly symmetric.
inline Matrix gram(const Matrix& g) {
  const std::size_t n = g.rows();
  Matrix r(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    auto gi = g.row(i);
    for (std::size_t j = i; j < n; ++j) {
      auto gj = g.row(j);
      double s = 0.0;
      for (std::size_t m = 0; m < g.cols(); ++m) s += gi[m] * gj[m];
      r(i, j) = s;
      r(j, i) = s;
    }
  }
  return r;
}

/// Principal submatrix M[idx, idx].
inline Matrix principal_submatrix(const Matrix& m, std::span<const std::size_t> idx) {
  Matrix r(idx.size(), idx.size());
  for (std::size_t a = 0; a < idx.size(); ++a) {
    auto src = m.row(idx[a]);
    for (std::size_t b = 0; b < idx.size(); ++b) r(a, b) = src[idx[b]];
  }
  return r;
}

/// LU factorization with partial pivoting, kept only as far as the
/// determinant and dense solves need it.
class LuFactor {
 public:
  explicit LuFactor(Matrix m) : lu_(std::move(m)), perm_(lu_.rows()) {
    if (!lu_.square()) throw Error(ErrorCode::kNotSquare, "LU of non-square matrix");
    const std::size_t n = lu_.rows();
    for (std::size_t i = 0; i < n; ++i) perm_[i] = i;
    for (std::size_t c = 0; c < n; ++c) {
      std::size_t p = c;
      for (std::size_t r = c + 1; r < n; ++r)
        if (std::abs(lu_(r, c)) > std::abs(lu_(p, c))) p = r;
      if (p != c) {
        for (std::size_t j = 0; j < n; ++j) std::swap(lu_(p, j), lu_(c, j));
        std::swap(perm_[p], perm_[c]);
        sign_ = -sign_;
      }
      const double pivot = lu_(c, c);
      if (pivot == 0.0) continue;
      for (std::size_t r = c + 1; r < n; ++r) {
        const double f = lu_(r, c) / pivot;
        lu_(r, c) = f;
        if (f == 0.0) continue;
        for (std::size_t j = c + 1; j < n; ++j) lu_(r, j) -= f * lu_(c, j);
      }
    }
  }

  double determinant() const {
    double d = sign_;
    for (std::size_t i = 0; i < lu_.rows(); ++i) d *= lu_(i, i);
    return d;
  }

  /// Smallest |U_ii|; zero means exactly singular.
  double min_abs_pivot() const {
    double m = lu_.rows() ? std::abs(lu_(0, 0)) : 0.0;
    for (std::size_t i = 1; i < lu_.rows(); ++i) m = std::min(m, std::abs(lu_(i, i)));
    return m;
  }

  /// Solves M·X = B. Caller guarantees M is non-singular.
  Matrix solve(const Matrix& b) const {
    const std::size_t n = lu_.rows();
    if (b.rows() != n) throw Error(ErrorCode::kDimensionMismatch, "LU solve shape mismatch");
    Matrix x(n, b.cols());
    for (std::size_t c = 0; c < b.cols(); ++c) {
      std::vector<double> y(n);
      for (std::size_t i = 0; i < n; ++i) {
        double s = b(perm_[i], c);
        for (std::size_t m = 0; m < i; ++m) s -= lu_(i, m) * y[m];
        y[i] = s;
      }
      for (std::size_t i = n; i-- > 0;) {
        double s = y[i];
        for (std::size_t m = i + 1; m < n; ++m) s -= lu_(i, m) * x(m, c);
        x(i, c) = s / lu_(i, i);
      }
    }
    return x;
  }

 private:
  Matrix lu_;
  std::vector<std::size_t> perm_;
  double sign_ = 1.0;
};

inline double determinant(const Matrix& m) {
  if (m.rows() == 0 && m.cols() == 0) return 1.0;
  return LuFactor(m).determinant();
}

}  // namespace sensorplace
