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
#include <array>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <thread>
#include <vector>

#include "profq/error.hpp"
#include "profq/rng.hpp"

namespace profq::learn {

// Binary labels throughout: 1 = human (positive class), 0 = llm.
inline constexpr int kHuman = 1;
inline constexpr int kLlm = 0;

// Dense row-major design matrix.
struct Dataset {
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;

  std::size_t size() const { return rows.size(); }
  std::size_t dim() const { return rows.empty() ? 0 : rows.front().size(); }
};

struct ForestParams {
  int n_trees = 300;
  int max_features = 6;  // ceil(sqrt(29))
  int min_leaf = 1;
  int max_depth = 0;     // 0 = unlimited
  bool bootstrap = true;
  std::uint64_t seed = 42;
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;     // x[feature] <= threshold
  int right = -1;
  std::array<int, 2> counts{};  // training samples per class reaching the node

  bool is_leaf() const { return feature < 0; }
  bool operator==(const TreeNode&) const = default;
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  int leaf_for(const std::vector<double>& x) const {
    int i = 0;
    while (!nodes[static_cast<std::size_t>(i)].is_leaf()) {
      const TreeNode& n = nodes[static_cast<std::size_t>(i)];
      i = x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
    }
    return i;
  }

  // Majority class at the leaf; ties vote human.
  int vote(const std::vector<double>& x) const {
    const TreeNode& leaf = nodes[static_cast<std::size_t>(leaf_for(x))];
    return leaf.counts[kHuman] >= leaf.counts[kLlm] ? kHuman : kLlm;
  }
  bool operator==(const DecisionTree&) const = default;
};

struct ForestModel {
  std::vector<DecisionTree> trees;
  ForestParams params;
  std::size_t dim = 0;
  int feature_schema_version = 1;
  std::vector<double> importances;  // mean impurity decrease, sums to 1 when any split exists
};

struct Prediction {
  int label = kHuman;
  double score = 0.0;  // fraction of votes for human
};

struct SplitChoice {
  int feature = -1;
  double threshold = 0.0;
};

namespace detail {

// Split quality compared exactly: for a split into children with class
// counts (a0, a1) and (b0, b1), weighted Gini impurity is minimal where
// S = (a0^2 + a1^2) / nA + (b0^2 + b1^2) / nB is maximal. S is held as the
// fraction num / den and compared by cross-multiplication so ties are exact
// and the (feature, threshold) tie-break is well defined.
struct SplitScore {
  __int128 num = 0;
  __int128 den = 1;

  static SplitScore of(const std::array<std::int64_t, 2>& l, const std::array<std::int64_t, 2>& r) {
    const __int128 nl = l[0] + l[1], nr = r[0] + r[1];
    const __int128 sl = static_cast<__int128>(l[0]) * l[0] + static_cast<__int128>(l[1]) * l[1];
    const __int128 sr = static_cast<__int128>(r[0]) * r[0] + static_cast<__int128>(r[1]) * r[1];
    return {sl * nr + sr * nl, nl * nr};
  }
  bool better_than(const SplitScore& o) const { return num * o.den > o.num * den; }
};

// Threshold between two adjacent distinct values; falls back to the lower
// value when the midpoint rounds onto the upper one.
inline double midpoint(double lo, double hi) {
  const double m = lo + 0.5 * (hi - lo);
  return m < hi ? m : lo;
}

inline double gini(std::int64_t c0, std::int64_t c1) {
  const double n = static_cast<double>(c0 + c1);
  if (n == 0) return 0.0;
  const double p0 = static_cast<double>(c0) / n, p1 = static_cast<double>(c1) / n;
  return 1.0 - p0 * p0 - p1 * p1;
}

class TreeBuilder {
 public:
  TreeBuilder(const Dataset& data, const ForestParams& params, RandomStream rng,
              std::vector<double>& importance)
      : data_(data), params_(params), rng_(std::move(rng)), importance_(importance) {}

  DecisionTree build(std::vector<std::size_t> samples) {
    tree_.nodes.clear();
    grow(std::move(samples), 0);
    return std::move(tree_);
  }

  // Best split over `features` for `samples`, or nullopt if no candidate
  // leaves at least min_leaf samples on each side.
  std::optional<SplitChoice> best_split(const std::vector<std::size_t>& samples,
                                        std::vector<int> features) const {
    std::sort(features.begin(), features.end());
    std::array<std::int64_t, 2> total{};
    for (auto s : samples) ++total[static_cast<std::size_t>(data_.labels[s])];
    const auto n = static_cast<std::int64_t>(samples.size());
    const std::int64_t min_leaf = std::max(1, params_.min_leaf);

    std::optional<SplitChoice> best;
    SplitScore best_score;
    std::vector<std::pair<double, int>> column(samples.size());
    for (int f : features) {
      for (std::size_t k = 0; k < samples.size(); ++k)
        column[k] = {data_.rows[samples[k]][static_cast<std::size_t>(f)], data_.labels[samples[k]]};
      std::sort(column.begin(), column.end());
      std::array<std::int64_t, 2> left{};
      for (std::size_t k = 0; k + 1 < column.size(); ++k) {
        ++left[static_cast<std::size_t>(column[k].second)];
        if (column[k].first == column[k + 1].first) continue;
        const std::int64_t nl = static_cast<std::int64_t>(k + 1);
        if (nl < min_leaf || n - nl < min_leaf) continue;
        const std::array<std::int64_t, 2> right{total[0] - left[0], total[1] - left[1]};
        const SplitScore score = SplitScore::of(left, right);
        // Features ascend and thresholds ascend within a feature, so strict
        // improvement keeps the lowest (feature, threshold) among ties.
        if (!best || score.better_than(best_score)) {
          best = SplitChoice{f, midpoint(column[k].first, column[k + 1].first)};
          best_score = score;
        }
      }
    }
    return best;
  }

 private:
  int grow(std::vector<std::size_t> samples, int depth) {
    const int index = static_cast<int>(tree_.nodes.size());
    tree_.nodes.emplace_back();
    std::array<int, 2> counts{};
    for (auto s : samples) ++counts[static_cast<std::size_t>(data_.labels[s])];
    tree_.nodes[static_cast<std::size_t>(index)].counts = counts;

    const bool pure = counts[0] == 0 || counts[1] == 0;
    const bool depth_cap = params_.max_depth > 0 && depth >= params_.max_depth;
    const bool too_small = static_cast<int>(samples.size()) < 2 * std::max(1, params_.min_leaf);
    if (pure || depth_cap || too_small) return index;

    auto split = best_split(samples, draw_features());
    if (!split) return index;

    std::vector<std::size_t> left, right;
    std::array<std::int64_t, 2> lc{}, rc{};
    for (auto s : samples) {
      const bool go_left = data_.rows[s][static_cast<std::size_t>(split->feature)] <= split->threshold;
      (go_left ? left : right).push_back(s);
      ++(go_left ? lc : rc)[static_cast<std::size_t>(data_.labels[s])];
    }
    const double n = static_cast<double>(samples.size());
    const double decrease = n * gini(counts[0], counts[1]) -
                            static_cast<double>(left.size()) * gini(lc[0], lc[1]) -
                            static_cast<double>(right.size()) * gini(rc[0], rc[1]);
    importance_[static_cast<std::size_t>(split->feature)] += std::max(0.0, decrease);

    tree_.nodes[static_cast<std::size_t>(index)].feature = split->feature;
    tree_.nodes[static_cast<std::size_t>(index)].threshold = split->threshold;
    const int l = grow(std::move(left), depth + 1);
    const int r = grow(std::move(right), depth + 1);
    tree_.nodes[static_cast<std::size_t>(index)].left = l;
    tree_.nodes[static_cast<std::size_t>(index)].right = r;
    return index;
  }

  std::vector<int> draw_features() {
    const int d = static_cast<int>(data_.dim());
    std::vector<int> all(static_cast<std::size_t>(d));
    std::iota(all.begin(), all.end(), 0);
    const int m = params_.max_features <= 0 ? d : std::min(params_.max_features, d);
    if (m == d) return all;
    // partial Fisher-Yates
    for (int i = 0; i < m; ++i) {
      const auto j = static_cast<std::size_t>(i) + rng_.below(static_cast<std::uint64_t>(d - i));
      std::swap(all[static_cast<std::size_t>(i)], all[j]);
    }
    all.resize(static_cast<std::size_t>(m));
    return all;
  }

  const Dataset& data_;
  const ForestParams& params_;
  RandomStream rng_;
  std::vector<double>& importance_;
  DecisionTree tree_;
};

inline void validate(const Dataset& data) {
  if (data.rows.size() != data.labels.size())
    throw Error(ErrorCode::kDimensionMismatch, "rows and labels differ in count");
  const std::size_t d = data.dim();
  for (const auto& r : data.rows)
    if (r.size() != d) throw Error(ErrorCode::kDimensionMismatch, "ragged feature matrix");
  for (int y : data.labels)
    if (y != kHuman && y != kLlm) throw Error(ErrorCode::kInvalidArgument, "labels must be 0 or 1");
  const bool has0 = std::find(data.labels.begin(), data.labels.end(), kLlm) != data.labels.end();
  const bool has1 = std::find(data.labels.begin(), data.labels.end(), kHuman) != data.labels.end();
  if (!has0 || !has1) throw Error(ErrorCode::kSingleClassTraining, "training labels hold one class");
}

}  // namespace detail

/// Bagged CART forest with Gini splits. Tree t draws all of its randomness
/// (bootstrap sample and per-node feature subsets) from the stream derived
/// from (seed, t), so the model does not depend on `workers`.
inline ForestModel train_forest(const Dataset& data, const ForestParams& params,
                                unsigned workers = 1) {
  detail::validate(data);
  if (data.size() < 10) throw Error(ErrorCode::kInsufficientRecords, "forest training needs n >= 10");
  if (params.n_trees < 1) throw Error(ErrorCode::kInvalidArgument, "n_trees must be >= 1");
  const std::size_t n = data.size(), d = data.dim();

  ForestModel model;
  model.params = params;
  model.dim = d;
  model.trees.resize(static_cast<std::size_t>(params.n_trees));
  std::vector<std::vector<double>> per_tree(static_cast<std::size_t>(params.n_trees),
                                            std::vector<double>(d, 0.0));

  auto work = [&](std::size_t begin, std::size_t step) {
    for (std::size_t t = begin; t < model.trees.size(); t += step) {
      RandomStream rng = RandomStream::derive(params.seed, t);
      std::vector<std::size_t> samples(n);
      if (params.bootstrap) {
        for (auto& s : samples) s = static_cast<std::size_t>(rng.below(n));
        std::sort(samples.begin(), samples.end());
      } else {
        std::iota(samples.begin(), samples.end(), 0);
      }
      detail::TreeBuilder builder(data, params, std::move(rng), per_tree[t]);
      model.trees[t] = builder.build(std::move(samples));
    }
  };
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(params.n_trees)));
  if (workers == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
    for (auto& th : pool) th.join();
  }

  // Per-tree normalised decrease, averaged over trees, renormalised.
  model.importances.assign(d, 0.0);
  for (const auto& imp : per_tree) {
    const double total = std::accumulate(imp.begin(), imp.end(), 0.0);
    if (total <= 0) continue;
    for (std::size_t f = 0; f < d; ++f) model.importances[f] += imp[f] / total;
  }
  const double sum = std::accumulate(model.importances.begin(), model.importances.end(), 0.0);
  if (sum > 0)
    for (auto& v : model.importances) v /= sum;
  return model;
}

/// Majority vote; an even split goes to human.
inline Prediction predict_forest(const ForestModel& model, const std::vector<double>& x) {
  if (x.size() != model.dim)
    throw Error(ErrorCode::kDimensionMismatch, "expected " + std::to_string(model.dim) +
                                                   " features, got " + std::to_string(x.size()));
  std::size_t human = 0;
  for (const auto& t : model.trees) human += t.vote(x) == kHuman ? 1 : 0;
  Prediction p;
  p.score = model.trees.empty() ? 0.0 : static_cast<double>(human) / static_cast<double>(model.trees.size());
  p.label = 2 * human >= model.trees.size() ? kHuman : kLlm;
  return p;
}

/// Root split an unrestricted tree (all features, no bootstrap) would choose.
inline std::optional<SplitChoice> root_split(const Dataset& data, int min_leaf = 1) {
  detail::validate(data);
  ForestParams p;
  p.min_leaf = min_leaf;
  p.max_features = 0;
  std::vector<double> scratch(data.dim(), 0.0);
  detail::TreeBuilder builder(data, p, RandomStream(0), scratch);
  std::vector<std::size_t> samples(data.size());
  std::iota(samples.begin(), samples.end(), 0);
  std::vector<int> features(data.dim());
  std::iota(features.begin(), features.end(), 0);
  return builder.best_split(samples, features);
}

}  // namespace profq::learn
