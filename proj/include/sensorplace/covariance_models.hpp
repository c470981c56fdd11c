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
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sensorplace/error.hpp"
#include "sensorplace/matrix.hpp"
#include "sensorplace/spd.hpp"

namespace sensorplace {

struct Edge {
  std::size_t from;
  std::size_t to;
  double weight;
};

/// Undirected weighted graph on nodes 0..n-1.
class Graph {
 public:
  Graph(std::size_t n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
    std::vector<std::pair<std::size_t, std::size_t>> seen;
    seen.reserve(edges_.size());
    for (const Edge& e : edges_) {
      if (e.from >= n_ || e.to >= n_) {
        throw Error(ErrorCode::kIndexOutOfRange,
                    "edge (" + std::to_string(e.from) + "," + std::to_string(e.to) +
                        ") outside node range " + std::to_string(n_),
                    std::max(e.from, e.to));
      }
      if (e.from == e.to) {
        throw Error(ErrorCode::kSelfLoop, "self-loop at node " + std::to_string(e.from), e.from);
      }
      if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
        throw Error(ErrorCode::kNonPositiveWeight,
                    "edge (" + std::to_string(e.from) + "," + std::to_string(e.to) +
                        ") has non-positive weight");
      }
      seen.emplace_back(std::min(e.from, e.to), std::max(e.from, e.to));
    }
    std::sort(seen.begin(), seen.end());
    auto dup = std::adjacent_find(seen.begin(), seen.end());
    if (dup != seen.end()) {
      throw Error(ErrorCode::kDuplicateEdge,
                  "edge (" + std::to_string(dup->first) + "," + std::to_string(dup->second) +
                      ") listed twice");
    }
  }

  std::size_t size() const noexcept { return n_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  /// Weighted Laplacian D − W.
  Matrix laplacian() const {
    Matrix l(n_, n_);
    for (const Edge& e : edges_) {
      l(e.from, e.from) += e.weight;
      l(e.to, e.to) += e.weight;
      l(e.from, e.to) -= e.weight;
      l(e.to, e.from) -= e.weight;
    }
    return l;
  }

 private:
  std::size_t n_;
  std::vector<Edge> edges_;
};

inline Graph path_graph(std::size_t n, double weight = 1.0) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, weight});
  return Graph(n, std::move(edges));
}

inline Graph ring_graph(std::size_t n, double weight = 1.0) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, weight});
  if (n > 2) edges.push_back({n - 1, 0, weight});
  return Graph(n, std::move(edges));
}

/// Σ = (L + εI)⁻¹, solved column by column against a Cholesky factor of the
/// precision.
inline CovarianceMatrix gmrf_covariance(const Graph& g, double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw Error(ErrorCode::kInvalidArgument, "epsilon must be > 0");
  }
  const std::size_t n = g.size();
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "graph has no nodes");
  Matrix precision = g.laplacian();
  for (std::size_t i = 0; i < n; ++i) precision(i, i) += epsilon;
  const CholeskyFactor f = cholesky(precision);

  Matrix sigma(n, n);
  std::vector<double> y(n);
  for (std::size_t c = 0; c < n; ++c) {
    // L·y = e_c, then Lᵀ·x = y.
    std::fill(y.begin(), y.end(), 0.0);
    for (std::size_t i = c; i < n; ++i) {
      auto li = f.row(i);
      double s = i == c ? 1.0 : 0.0;
      for (std::size_t m = c; m < i; ++m) s -= li[m] * y[m];
      y[i] = s / li[i];
    }
    for (std::size_t i = n; i-- > 0;) {
      double s = y[i];
      for (std::size_t m = i + 1; m < n; ++m) s -= f(m, i) * sigma(m, c);
      sigma(i, c) = s / f.diagonal(i);
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double avg = 0.5 * (sigma(i, j) + sigma(j, i));
      sigma(i, j) = avg;
      sigma(j, i) = avg;
    }
  return build_covariance(std::move(sigma));
}

inline constexpr double kDefaultConditionCap = 1e6;

/// Σ = G·Gᵀ + δI with G seeded standard normal. δ is sized from a
/// Gershgorin/trace bound on λ_max(G·Gᵀ) so that cond(Σ) ≤ condition_cap.
inline CovarianceMatrix random_spd(std::size_t n, std::uint64_t seed,
                                   double condition_cap = kDefaultConditionCap) {
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "random_spd needs n >= 1");
  if (!(condition_cap >= 1.0)) throw Error(ErrorCode::kInvalidArgument, "condition cap must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (double& v : g.row(i)) v = normal(rng);
  Matrix sigma = gram(g);

  double trace = 0.0;
  double gershgorin = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    trace += sigma(i, i);
    double row_sum = 0.0;
    for (double v : sigma.row(i)) row_sum += std::abs(v);
    gershgorin = std::max(gershgorin, row_sum);
  }
  const double lambda_max_bound = std::max(std::min(trace, gershgorin), 1e-300);
  if (condition_cap == 1.0) return build_covariance(Matrix::identity(n));
  // (λ_max + δ)/δ ≤ cap.
  const double delta = lambda_max_bound / (condition_cap - 1.0);
  for (std::size_t i = 0; i < n; ++i) sigma(i, i) += delta;
  return build_covariance(std::move(sigma));
}

inline CovarianceMatrix diagonal_covariance(std::span<const double> variances) {
  for (std::size_t i = 0; i < variances.size(); ++i) {
    if (!(variances[i] > 0.0) || !std::isfinite(variances[i])) {
      throw Error(ErrorCode::kNonPositiveVariance,
                  "variance " + std::to_string(i) + " must be > 0", i);
    }
  }
  return build_covariance(Matrix::diagonal(variances));
}

namespace detail {

// Reads non-comment, non-blank lines, remembering the 1-based line numbers.
struct ContentLine {
  std::size_t number;
  std::string text;
};

inline std::vector<ContentLine> content_lines(std::istream& in) {
  std::vector<ContentLine> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    out.push_back({number, std::move(line)});
  }
  return out;
}

struct Token {
  std::string_view text;
  std::size_t column;  // 1-based
};

inline std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i >= line.size()) break;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    out.push_back({line.substr(start, i - start), start + 1});
  }
  return out;
}

[[noreturn]] inline void parse_error(std::size_t line, std::size_t column, const std::string& what) {
  throw Error(ErrorCode::kParseError,
              "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what,
              line);
}

template <typename T>
T parse_number(const Token& tok, std::size_t line) {
  T value{};
  const char* begin = tok.text.data();
  const char* end = begin + tok.text.size();
  if (!tok.text.empty() && *begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    parse_error(line, tok.column, "cannot parse '" + std::string(tok.text) + "'");
  }
  return value;
}

inline std::size_t parse_header(const std::vector<ContentLine>& lines) {
  if (lines.empty()) parse_error(1, 1, "missing dimension line");
  const auto toks = tokenize(lines[0].text);
  if (toks.size() != 1) parse_error(lines[0].number, 1, "expected a single dimension");
  return parse_number<std::size_t>(toks[0], lines[0].number);
}

inline std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return in;
}

}  // namespace detail

/// Parses the dense matrix text format: a line with n, then n rows of n
/// whitespace-separated reals. '#' lines are comments.
inline Matrix parse_dense_matrix(std::istream& in) {
  const auto lines = detail::content_lines(in);
  const std::size_t n = detail::parse_header(lines);
  if (n == 0) detail::parse_error(lines[0].number, 1, "dimension must be >= 1");
  if (lines.size() - 1 < n) {
    detail::parse_error(lines.back().number + 1, 1,
                        "expected " + std::to_string(n) + " rows, found " +
                            std::to_string(lines.size() - 1));
  }
  if (lines.size() - 1 > n) detail::parse_error(lines[n + 1].number, 1, "extra row");
  Matrix m(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    const auto& line = lines[r + 1];
    const auto toks = detail::tokenize(line.text);
    if (toks.size() != n) {
      const std::size_t col = toks.size() > n ? toks[n].column : line.text.size() + 1;
      detail::parse_error(line.number, col,
                          "expected " + std::to_string(n) + " entries, found " +
                              std::to_string(toks.size()));
    }
    for (std::size_t c = 0; c < n; ++c) m(r, c) = detail::parse_number<double>(toks[c], line.number);
  }
  return m;
}

inline CovarianceMatrix load_covariance(const std::filesystem::path& path) {
  auto in = detail::open_input(path);
  Matrix m = parse_dense_matrix(in);
  return build_covariance(std::move(m));
}

/// Edge-list format: a line with n, then "i j weight" per line.
inline Graph parse_graph(std::istream& in) {
  const auto lines = detail::content_lines(in);
  const std::size_t n = detail::parse_header(lines);
  std::vector<Edge> edges;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto toks = detail::tokenize(lines[r].text);
    if (toks.size() != 3) {
      detail::parse_error(lines[r].number, toks.size() > 3 ? toks[3].column : 1,
                          "expected 'i j weight'");
    }
    edges.push_back({detail::parse_number<std::size_t>(toks[0], lines[r].number),
                     detail::parse_number<std::size_t>(toks[1], lines[r].number),
                     detail::parse_number<double>(toks[2], lines[r].number)});
  }
  return Graph(n, std::move(edges));
}

inline Graph load_graph(const std::filesystem::path& path) {
  auto in = detail::open_input(path);
  return parse_graph(in);
}

/// Writes the dense format with 17 significant digits, enough for an exact
/// round trip of every double.
inline void write_dense_matrix(std::ostream& out, const Matrix& m) {
  out << m.rows() << '\n';
  char buf[32];
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
      if (j) out << ' ';
      out << buf;
    }
    out << '\n';
  }
}

}  // namespace sensorplace
