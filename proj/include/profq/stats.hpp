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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "profq/error.hpp"
#include "profq/rng.hpp"

namespace profq::stats {

enum class Tier { kNs, kP05, kP01, kP001 };
enum class Direction { kPositive, kNegative, kZero };

struct CorrelationResult {
  std::string feature;
  double rho = 0.0;
  double p_value = 1.0;
  std::size_t n = 0;
  Tier tier = Tier::kNs;
  Direction direction = Direction::kZero;
  bool constant = false;  // feature had a single value over the sample
};

inline Tier tier_for(double p) {
  if (p < 0.001) return Tier::kP001;
  if (p < 0.01) return Tier::kP01;
  if (p < 0.05) return Tier::kP05;
  return Tier::kNs;
}

inline Direction direction_for(double rho) {
  if (rho > 0) return Direction::kPositive;
  if (rho < 0) return Direction::kNegative;
  return Direction::kZero;
}

inline std::string_view tier_name(Tier t) {
  switch (t) {
    case Tier::kP001: return "p001";
    case Tier::kP01: return "p01";
    case Tier::kP05: return "p05";
    case Tier::kNs: return "ns";
  }
  return "ns";
}

/// Arrow glyphs: one arrow per significance level, pointing with the sign.
inline std::string arrows(const CorrelationResult& r) {
  int count = 0;
  switch (r.tier) {
    case Tier::kP001: count = 3; break;
    case Tier::kP01: count = 2; break;
    case Tier::kP05: count = 1; break;
    case Tier::kNs: count = 0; break;
  }
  if (r.direction == Direction::kZero) count = 0;
  std::string out;
  for (int i = 0; i < count; ++i) out += r.direction == Direction::kPositive ? "↑" : "↓";
  return out;
}

/// Ranks 1..n; ties share the mean of the positions they occupy.
inline std::vector<double> average_ranks(const std::vector<double>& values) {
  const std::size_t n = values.size();
  if (n < 2) throw Error(ErrorCode::kTooFewSamples, "ranking needs at least 2 values");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i + 1;
    while (j < n && values[order[j]] == values[order[i]]) ++j;
    // positions i+1 .. j share their mean rank
    const double mean_rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = mean_rank;
    i = j;
  }
  return ranks;
}

namespace detail {

inline bool is_constant(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  const double r = sxy / std::sqrt(sxx * syy);
  return std::clamp(r, -1.0, 1.0);
}

inline void check_pair(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size())
    throw Error(ErrorCode::kLengthMismatch, "vectors differ in length (" + std::to_string(x.size()) +
                                                " vs " + std::to_string(y.size()) + ")");
  if (x.size() < 3) throw Error(ErrorCode::kTooFewSamples, "Spearman needs at least 3 samples");
  if (is_constant(x) || is_constant(y))
    throw Error(ErrorCode::kConstantVector, "correlation undefined for a constant vector");
}

}  // namespace detail

/// Spearman's rho: Pearson correlation of average ranks.
inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  detail::check_pair(x, y);
  return detail::pearson(average_ranks(x), average_ranks(y));
}

/// Two-sided p-value from the t approximation with n - 2 degrees of freedom.
/// |rho| = 1 yields 0.
inline double p_value_t(double rho, std::size_t n) {
  if (n < 4) throw Error(ErrorCode::kTooFewSamples, "t approximation needs n >= 4");
  if (rho == 0.0) return 1.0;
  if (std::fabs(rho) >= 1.0) return 0.0;
  const double df = static_cast<double>(n - 2);
  const double t = rho * std::sqrt(df / (1.0 - rho * rho));
  boost::math::students_t dist(df);
  const double p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t)));
  return std::clamp(p, 0.0, 1.0);
}

/// Permutation p-value: y is shuffled k times (shuffle i draws from its own
/// stream derived from (seed, i)); returns (1 + #{|rho*| >= |rho|}) / (k + 1).
inline double p_value_permutation(const std::vector<double>& x, const std::vector<double>& y,
                                  std::size_t k, std::uint64_t seed, unsigned workers = 1) {
  if (k < 999) throw Error(ErrorCode::kInvalidArgument, "permutation test needs k >= 999");
  detail::check_pair(x, y);
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double observed = std::fabs(detail::pearson(rx, ry));
  // Relative slack so permutations reproducing the observed statistic are
  // counted despite rounding.
  const double threshold = observed - 1e-12 * std::max(1.0, observed);

  std::vector<unsigned char> hit(k, 0);
  auto work = [&](std::size_t begin, std::size_t step) {
    std::vector<double> perm;
    for (std::size_t i = begin; i < k; i += step) {
      perm = ry;
      RandomStream rng = RandomStream::derive(seed, i);
      rng.shuffle(perm);
      hit[i] = std::fabs(detail::pearson(rx, perm)) >= threshold ? 1 : 0;
    }
  };
  workers = std::max(1u, workers);
  if (workers == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
    for (auto& t : pool) t.join();
  }
  const auto count = static_cast<double>(std::count(hit.begin(), hit.end(), 1));
  return (1.0 + count) / (static_cast<double>(k) + 1.0);
}

struct PValueMethod {
  enum class Kind { kAuto, kTApprox, kPermutation };
  Kind kind = Kind::kAuto;
  std::size_t permutations = 9999;
  std::uint64_t seed = 42;
};

/// t approximation for n >= 30, permutation (k = 9999 by default) below.
inline double p_value(const std::vector<double>& x, const std::vector<double>& y, double rho,
                      const PValueMethod& method = {}, unsigned workers = 1) {
  auto kind = method.kind;
  if (kind == PValueMethod::Kind::kAuto)
    kind = x.size() >= 30 ? PValueMethod::Kind::kTApprox : PValueMethod::Kind::kPermutation;
  if (kind == PValueMethod::Kind::kTApprox) return p_value_t(rho, x.size());
  return p_value_permutation(x, y, method.permutations, method.seed, workers);
}

/// One result per column of `columns` (each a full sample), in the given
/// order. Constant columns are reported as rho = 0, ns, flagged constant.
inline std::vector<CorrelationResult> correlation_table(
    const std::vector<std::string>& names, const std::vector<std::vector<double>>& columns,
    const std::vector<double>& target, const PValueMethod& method = {}, unsigned workers = 1) {
  if (names.size() != columns.size())
    throw Error(ErrorCode::kLengthMismatch, "feature names and columns differ in count");
  if (target.size() < 10) throw Error(ErrorCode::kTooFewSamples, "correlation table needs n >= 10");
  if (detail::is_constant(target))
    throw Error(ErrorCode::kConstantVector, "target variable is constant");
  std::vector<CorrelationResult> out;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c].size() != target.size())
      throw Error(ErrorCode::kLengthMismatch, "feature '" + names[c] + "' has " +
                                                  std::to_string(columns[c].size()) + " rows, target has " +
                                                  std::to_string(target.size()));
    CorrelationResult r;
    r.feature = names[c];
    r.n = target.size();
    if (detail::is_constant(columns[c])) {
      r.constant = true;
    } else {
      r.rho = spearman(columns[c], target);
      r.p_value = p_value(columns[c], target, r.rho, method, workers);
      r.tier = tier_for(r.p_value);
      r.direction = direction_for(r.rho);
    }
    out.push_back(std::move(r));
  }
  return out;
}

inline std::string format_real(double v, int precision = 6) {
  std::ostringstream os;
  os.precision(precision);
  os << v;
  return os.str();
}

inline void write_csv(std::ostream& os, const std::vector<CorrelationResult>& results) {
  os << "feature,rho,p_value,n,tier\n";
  for (const auto& r : results)
    os << r.feature << ',' << format_real(r.rho, 10) << ',' << format_real(r.p_value, 10) << ','
       << r.n << ',' << tier_name(r.tier) << '\n';
}

inline void write_markdown(std::ostream& os, const std::vector<CorrelationResult>& results,
                           const std::string& title) {
  os << "| feature | " << title << " | rho | p |\n";
  os << "|---|:-:|--:|--:|\n";
  for (const auto& r : results) {
    os << "| " << r.feature << " | " << (r.constant ? "const" : arrows(r)) << " | "
       << format_real(r.rho, 3) << " | " << format_real(r.p_value, 3) << " |\n";
  }
  os << "\n↑ = p < .05, ↑↑ = p < .01, ↑↑↑ = p < .001 (↓ for negative).\n";
}

}  // namespace profq::stats
