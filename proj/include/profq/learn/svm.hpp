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
#include <string>
#include <vector>

#include "profq/error.hpp"
#include "profq/learn/forest.hpp"
#include "profq/learn/tfidf.hpp"
#include "profq/rng.hpp"

namespace profq::learn {

struct SvmParams {
  double lambda = 1e-4;
  int epochs = 50;
  std::uint64_t seed = 42;
};

struct SvmModel {
  TfidfVectorizer vectorizer;
  std::vector<double> weights;  // one per vocabulary term
  double bias = 0.0;
  SvmParams params;

  double decision(const SparseVector& x) const {
    double s = bias;
    for (const auto& [i, v] : x) s += weights[i] * v;
    return s;
  }

  double decision(const std::string& text) const { return decision(vectorizer.transform(text)); }
};

/// human = +1; a zero decision value counts as human.
inline Prediction predict_svm(const SvmModel& model, const std::string& text) {
  const double d = model.decision(text);
  return {d >= 0.0 ? kHuman : kLlm, d};
}

/// Pegasos: stochastic subgradient descent on the L2-regularised hinge loss
/// with step 1/(lambda t), followed by projection onto the ball of radius
/// 1/sqrt(lambda). The bias is learned as the weight of a constant feature.
/// Epoch e visits the documents in the order shuffled by stream (seed, e).
inline SvmModel train_svm_vectors(const std::vector<SparseVector>& xs, const std::vector<int>& y,
                                  std::size_t dim, const SvmParams& params) {
  if (xs.size() != y.size()) throw Error(ErrorCode::kLengthMismatch, "documents and labels differ in count");
  const bool has_pos = std::find(y.begin(), y.end(), kHuman) != y.end();
  const bool has_neg = std::find(y.begin(), y.end(), kLlm) != y.end();
  if (!has_pos || !has_neg) throw Error(ErrorCode::kSingleClassTraining, "training labels hold one class");
  if (!(params.lambda > 0)) throw Error(ErrorCode::kInvalidArgument, "lambda must be positive");

  std::vector<double> w(dim + 1, 0.0);  // w[dim] is the bias weight
  const double radius = 1.0 / std::sqrt(params.lambda);
  std::uint64_t t = 0;
  std::vector<std::size_t> order(xs.size());
  for (int epoch = 0; epoch < params.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), 0);
    RandomStream rng = RandomStream::derive(params.seed, static_cast<std::uint64_t>(epoch));
    rng.shuffle(order);
    for (std::size_t i : order) {
      ++t;
      const double eta = 1.0 / (params.lambda * static_cast<double>(t));
      const double label = y[i] == kHuman ? 1.0 : -1.0;
      double margin = w[dim];
      for (const auto& [j, v] : xs[i]) margin += w[j] * v;
      margin *= label;
      const double shrink = 1.0 - eta * params.lambda;
      for (auto& wj : w) wj *= shrink;
      if (margin < 1.0) {
        for (const auto& [j, v] : xs[i]) w[j] += eta * label * v;
        w[dim] += eta * label;
      }
      double norm = 0.0;
      for (double wj : w) norm += wj * wj;
      norm = std::sqrt(norm);
      if (norm > radius)
        for (auto& wj : w) wj *= radius / norm;
    }
  }
  SvmModel model;
  model.params = params;
  model.bias = w[dim];
  w.pop_back();
  model.weights = std::move(w);
  return model;
}

inline SvmModel train_svm(const std::vector<std::string>& texts, const std::vector<int>& y,
                          const SvmParams& params) {
  if (texts.size() != y.size()) throw Error(ErrorCode::kLengthMismatch, "texts and labels differ in count");
  TfidfVectorizer vec = fit_tfidf(texts);
  std::vector<SparseVector> xs;
  xs.reserve(texts.size());
  for (const auto& t : texts) xs.push_back(vec.transform(t));
  SvmModel model = train_svm_vectors(xs, y, vec.size(), params);
  model.vectorizer = std::move(vec);
  return model;
}

}  // namespace profq::learn
