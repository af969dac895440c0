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
#include "synthetic.hpp"
#include "test_support.hpp"

using namespace profq;
using namespace profq::learn;

namespace {

double accuracy(const ForestModel& m, const Dataset& d) {
  std::size_t ok = 0;
  for (std::size_t i = 0; i < d.size(); ++i) ok += predict_forest(m, d.rows[i]).label == d.labels[i];
  return static_cast<double>(ok) / static_cast<double>(d.size());
}

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

TEST(RootSplit, MatchesBruteForce) {
  std::mt19937_64 rng(2024);
  int compared = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const Dataset d = synthetic::small_random(rng);
    const auto got = root_split(d);
    const auto want = oracle::root_split(d);
    ASSERT_EQ(got.has_value(), want.has_value());
    if (!got) continue;
    EXPECT_EQ(got->feature, want->feature) << "trial " << trial;
    EXPECT_EQ(got->threshold, want->threshold) << "trial " << trial;
    ++compared;
  }
  EXPECT_GT(compared, 400);
}

TEST(RootSplit, TieGoesToLowestFeatureAndThreshold) {
  // both features separate perfectly: feature 0 wins
  Dataset d{{{0, 0}, {1, 1}, {2, 2}, {3, 3}}, {0, 0, 1, 1}};
  const auto s = root_split(d);
  ASSERT_TRUE(s);
  EXPECT_EQ(s->feature, 0);
  EXPECT_EQ(s->threshold, 1.5);
  // two equally good thresholds on one feature: lower one wins
  Dataset e{{{0}, {1}, {2}}, {1, 0, 1}};
  EXPECT_EQ(root_split(e)->threshold, 0.5);
}

TEST(Forest, SeparableTrainingAccuracy) {
  const Dataset d = synthetic::separable(200, 1.0, 5);
  ForestParams p;
  p.n_trees = 100;
  p.max_features = 2;
  EXPECT_EQ(accuracy(train_forest(d, p), d), 1.0);
}

TEST(Forest, XorHeldOut) {
  const Dataset all = synthetic::xor_clusters(500, 9);
  Dataset train, test;
  for (std::size_t i = 0; i < all.size(); ++i) {
    Dataset& dst = i < 400 ? train : test;
    dst.rows.push_back(all.rows[i]);
    dst.labels.push_back(all.labels[i]);
  }
  ForestParams p;
  p.n_trees = 200;
  p.max_features = 1;
  EXPECT_GE(accuracy(train_forest(train, p, 4), test), 0.95);
}

TEST(Forest, Errors) {
  Dataset one{{{1}, {2}, {3}, {4}, {5}, {6}, {7}, {8}, {9}, {10}}, std::vector<int>(10, 1)};
  EXPECT_EQ(code_of([&] { train_forest(one, {}); }), ErrorCode::kSingleClassTraining);
  Dataset small{{{1}, {2}, {3}}, {0, 1, 0}};
  EXPECT_EQ(code_of([&] { train_forest(small, {}); }), ErrorCode::kInsufficientRecords);
  Dataset ragged{{{1}, {2, 3}}, {0, 1}};
  EXPECT_EQ(code_of([&] { train_forest(ragged, {}); }), ErrorCode::kDimensionMismatch);
  const auto m = train_forest(synthetic::separable(50, 1.0, 1), {});
  EXPECT_EQ(code_of([&] { predict_forest(m, {1.0}); }), ErrorCode::kDimensionMismatch);
}

TEST(Forest, DeterministicAcrossWorkers) {
  const Dataset d = synthetic::xor_clusters(200, 3);
  ForestParams p;
  p.n_trees = 40;
  const auto a = train_forest(d, p, 1);
  const auto b = train_forest(d, p, 7);
  EXPECT_EQ(a.trees, b.trees);
  EXPECT_EQ(a.importances, b.importances);
  p.seed = 43;
  EXPECT_NE(train_forest(d, p, 1).trees, a.trees);
}

TEST(Forest, VoteConventions) {
  ForestModel m;
  m.dim = 1;
  DecisionTree human_leaf, llm_leaf;
  human_leaf.nodes = {TreeNode{-1, 0, -1, -1, {0, 3}}};
  llm_leaf.nodes = {TreeNode{-1, 0, -1, -1, {3, 0}}};
  m.trees = {llm_leaf, llm_leaf};
  auto p = predict_forest(m, {0.0});
  EXPECT_EQ(p.label, kLlm);
  EXPECT_EQ(p.score, 0.0);
  m.trees.clear();
  for (int i = 0; i < 50; ++i) {
    m.trees.push_back(human_leaf);
    m.trees.push_back(llm_leaf);
  }
  p = predict_forest(m, {0.0});
  EXPECT_EQ(p.label, kHuman);
  EXPECT_EQ(p.score, 0.5);
}

TEST(Forest, SingleTreeMemorises) {
  const Dataset d = synthetic::xor_clusters(60, 4);
  ForestParams p;
  p.n_trees = 1;
  p.bootstrap = false;
  p.max_features = 0;
  const auto m = train_forest(d, p);
  EXPECT_EQ(accuracy(m, d), 1.0);
}

TEST(Forest, ImportancesFormADistribution) {
  // feature 1 is noise, feature 0 decides
  std::mt19937_64 rng(8);
  Dataset d;
  for (int i = 0; i < 200; ++i) {
    const double x = static_cast<double>(rng() % 100);
    d.rows.push_back({x, static_cast<double>(rng() % 100)});
    d.labels.push_back(x < 50 ? kLlm : kHuman);
  }
  ForestParams p;
  p.n_trees = 50;
  p.max_features = 1;
  const auto m = train_forest(d, p);
  EXPECT_NEAR(m.importances[0] + m.importances[1], 1.0, 1e-12);
  EXPECT_GT(m.importances[0], 0.8);
}

// Strictly increasing transforms of a feature leave predictions on the
// training points unchanged. Bootstrap is off: a point left out of a
// tree's sample can sit strictly inside a threshold gap, and midpoints are
// not preserved by the transform.
TEST(ForestProperty, MonotoneTransformInvariance) {
  const Dataset d = synthetic::xor_clusters(120, 12);
  Dataset grid = d;
  for (auto& r : grid.rows)
    for (auto& v : r) v = std::round(v * 4);
  Dataset warped = grid;
  for (auto& r : warped.rows)
    for (auto& v : r) v = v * v * v + 3 * v;
  ForestParams p;
  p.n_trees = 30;
  p.max_features = 1;
  p.bootstrap = false;
  const auto a = train_forest(grid, p);
  const auto b = train_forest(warped, p);
  for (std::size_t i = 0; i < grid.size(); ++i)
    EXPECT_EQ(predict_forest(a, grid.rows[i]).score, predict_forest(b, warped.rows[i]).score);
}

TEST(ForestProperty, ScoresInUnitInterval) {
  const auto m = train_forest(synthetic::xor_clusters(100, 2), {});
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int i = 0; i < 200; ++i) {
    const auto p = predict_forest(m, {u(rng), u(rng)});
    EXPECT_GE(p.score, 0.0);
    EXPECT_LE(p.score, 1.0);
    EXPECT_EQ(p.label, p.score >= 0.5 ? kHuman : kLlm);
  }
}
