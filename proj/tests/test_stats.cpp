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

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "test_support.hpp"

using namespace profq;
using namespace profq::stats;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kInvalidArgument;
}

}  // namespace

TEST(Ranks, Examples) {
  EXPECT_EQ(average_ranks({10, 20, 30}), (std::vector<double>{1, 2, 3}));
  EXPECT_EQ(average_ranks({10, 10, 30}), (std::vector<double>{1.5, 1.5, 3}));
  EXPECT_EQ(average_ranks({5, 5, 5}), (std::vector<double>{2, 2, 2}));
  EXPECT_EQ(code_of([] { average_ranks({1}); }), ErrorCode::kTooFewSamples);
}

TEST(Ranks, SumIsTriangular) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> v(2 + rng() % 50);
    for (auto& x : v) x = static_cast<double>(rng() % 7);
    double sum = 0;
    for (double r : average_ranks(v)) sum += r;
    const double n = static_cast<double>(v.size());
    EXPECT_DOUBLE_EQ(sum, n * (n + 1) / 2);
  }
}

TEST(Spearman, Examples) {
  EXPECT_DOUBLE_EQ(spearman({1, 2, 3}, {1, 2, 3}), 1.0);
  EXPECT_DOUBLE_EQ(spearman({1, 2, 3}, {3, 2, 1}), -1.0);
  EXPECT_NEAR(spearman({1, 2, 3, 4, 5}, {2, 1, 4, 3, 5}), 0.8, 1e-15);
}

TEST(Spearman, Errors) {
  EXPECT_EQ(code_of([] { spearman({1, 2, 3}, {1, 2}); }), ErrorCode::kLengthMismatch);
  EXPECT_EQ(code_of([] { spearman({1, 2}, {1, 2}); }), ErrorCode::kTooFewSamples);
  EXPECT_EQ(code_of([] { spearman({1, 1, 1}, {1, 2, 3}); }), ErrorCode::kConstantVector);
}

TEST(Spearman, MatchesOracleWithTies) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 3 + rng() % 60;
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = static_cast<double>(rng() % 5);
      y[i] = static_cast<double>(rng() % 9) * 0.5;
    }
    if (x == std::vector<double>(n, x[0]) || y == std::vector<double>(n, y[0])) continue;
    EXPECT_NEAR(spearman(x, y), oracle::spearman(x, y), 1e-12);
  }
}

TEST(Spearman, SymmetricAndSignFlip) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> x(20), y(20), neg(20);
    for (int i = 0; i < 20; ++i) {
      x[i] = static_cast<double>(rng() % 100);
      y[i] = static_cast<double>(rng() % 100);
      neg[i] = -y[i];
    }
    EXPECT_DOUBLE_EQ(spearman(x, y), spearman(y, x));
    EXPECT_NEAR(spearman(x, neg), -spearman(x, y), 1e-15);
    EXPECT_LE(std::fabs(spearman(x, y)), 1.0);
  }
}

TEST(PValue, Conventions) {
  EXPECT_EQ(p_value_t(0.0, 10), 1.0);
  EXPECT_EQ(p_value_t(1.0, 10), 0.0);
  EXPECT_EQ(p_value_t(-1.0, 50), 0.0);
}

TEST(PValue, TApproximationKnownValue) {
  // rho = 0.5, n = 20: t = 0.5 * sqrt(18 / 0.75); reference from scipy.stats.t.sf(t, 18) * 2
  EXPECT_NEAR(p_value_t(0.5, 20), 0.024769558804109703, 1e-12);
}

TEST(PValue, PermutationSelfOracle) {
  const std::vector<double> x = {1, 2, 3, 4, 5}, y = {2, 1, 4, 3, 5};
  const double p = p_value_permutation(x, y, 9999, 7);
  EXPECT_GT(p, 0.0);
  EXPECT_LT(p, 0.2);
  // exact answer: 14 of the 120 permutations have |rho| >= 0.8
  EXPECT_NEAR(p, 14.0 / 120.0, 0.02);
  EXPECT_EQ(p, p_value_permutation(x, y, 9999, 7, 4));
  EXPECT_EQ(code_of([&] { p_value_permutation(x, y, 10, 7); }), ErrorCode::kInvalidArgument);
}

TEST(Table, PerfectAndConstantColumns) {
  std::vector<double> target;
  for (int i = 0; i < 40; ++i) target.push_back(i % 7 + 0.1 * i);
  std::vector<double> neg, flat(40, 2.0);
  for (double v : target) neg.push_back(-v);
  const auto t = correlation_table({"a", "b", "c"}, {target, neg, flat}, target);
  EXPECT_DOUBLE_EQ(t[0].rho, 1.0);
  EXPECT_EQ(t[0].tier, Tier::kP001);
  EXPECT_EQ(arrows(t[0]), "↑↑↑");
  EXPECT_DOUBLE_EQ(t[1].rho, -1.0);
  EXPECT_EQ(t[1].tier, Tier::kP001);
  EXPECT_EQ(arrows(t[1]), "↓↓↓");
  EXPECT_TRUE(t[2].constant);
  EXPECT_EQ(t[2].rho, 0.0);
  EXPECT_EQ(t[2].tier, Tier::kNs);
}

TEST(Table, Preconditions) {
  std::vector<double> small(5, 1.0);
  EXPECT_EQ(code_of([&] { correlation_table({"a"}, {small}, {1, 2, 3, 4, 5}); }), ErrorCode::kTooFewSamples);
  std::vector<double> t10 = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  EXPECT_EQ(code_of([&] { correlation_table({"a"}, {small}, t10); }), ErrorCode::kLengthMismatch);
  EXPECT_EQ(code_of([&] { correlation_table({"a"}, {t10}, std::vector<double>(10, 3.0)); }),
            ErrorCode::kConstantVector);
}

TEST(Table, SmallSamplesUsePermutationDeterministically) {
  std::vector<double> x = {1, 3, 2, 5, 4, 7, 6, 9, 8, 10, 12, 11};
  std::vector<double> y = {2, 1, 4, 3, 6, 5, 8, 7, 10, 9, 11, 12};
  PValueMethod m;
  m.seed = 3;
  const auto a = correlation_table({"x"}, {x}, y, m, 1);
  const auto b = correlation_table({"x"}, {x}, y, m, 3);
  EXPECT_EQ(a[0].p_value, b[0].p_value);
  EXPECT_LT(a[0].p_value, 0.001);
}

TEST(Tiers, Boundaries) {
  EXPECT_EQ(tier_for(0.05), Tier::kNs);
  EXPECT_EQ(tier_for(0.0499), Tier::kP05);
  EXPECT_EQ(tier_for(0.0099), Tier::kP01);
  EXPECT_EQ(tier_for(0.0009), Tier::kP001);
}
