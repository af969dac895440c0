// Copyright 2026 The profq Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Brute-force reference implementations. Written from the textbook
// definitions and kept deliberately naive; shared by unit and acceptance
// tests.

#include <cmath>
#include <cstddef>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "profq/learn/forest.hpp"

namespace profq::oracle {

// rank_i = 1 + #{j : x_j < x_i} + (#{j : x_j == x_i} - 1) / 2
inline std::vector<long double> count_ranks(const std::vector<double>& x) {
  std::vector<long double> r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    long double less = 0, equal = 0;
    for (double v : x) {
      less += v < x[i];
      equal += v == x[i];
    }
    r[i] = 1 + less + (equal - 1) / 2;
  }
  return r;
}

// Pearson on ranks via the raw-sum formula, in extended precision.
inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  const auto rx = count_ranks(x), ry = count_ranks(y);
  const long double n = static_cast<long double>(x.size());
  long double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += rx[i];
    sy += ry[i];
    sxx += rx[i] * rx[i];
    syy += ry[i] * ry[i];
    sxy += rx[i] * ry[i];
  }
  const long double cov = n * sxy - sx * sy;
  const long double vx = n * sxx - sx * sx, vy = n * syy - sy * sy;
  return static_cast<double>(cov / std::sqrt(vx * vy));
}

inline double weighted_gini(const std::vector<int>& labels_left, const std::vector<int>& labels_right) {
  auto g = [](const std::vector<int>& ls) {
    if (ls.empty()) return 0.0;
    double p1 = 0;
    for (int l : ls) p1 += l;
    p1 /= static_cast<double>(ls.size());
    return 1.0 - p1 * p1 - (1 - p1) * (1 - p1);
  };
  const double n = static_cast<double>(labels_left.size() + labels_right.size());
  return (static_cast<double>(labels_left.size()) * g(labels_left) +
          static_cast<double>(labels_right.size()) * g(labels_right)) /
         n;
}

struct OracleSplit {
  int feature = -1;
  double threshold = 0;
  double impurity = 0;
};

// Every feature, every midpoint between consecutive distinct values; lowest
// weighted Gini wins, ties to the lowest (feature, threshold).
inline std::optional<OracleSplit> root_split(const learn::Dataset& d) {
  std::optional<OracleSplit> best;
  for (std::size_t f = 0; f < d.dim(); ++f) {
    std::set<double> values;
    for (const auto& r : d.rows) values.insert(r[f]);
    for (auto it = values.begin(); std::next(it) != values.end(); ++it) {
      const double t = *it + 0.5 * (*std::next(it) - *it);
      std::vector<int> l, r;
      for (std::size_t i = 0; i < d.size(); ++i) (d.rows[i][f] <= t ? l : r).push_back(d.labels[i]);
      const double imp = weighted_gini(l, r);
      if (!best || imp < best->impurity - 1e-12) best = OracleSplit{static_cast<int>(f), t, imp};
    }
  }
  return best;
}

}  // namespace profq::oracle
