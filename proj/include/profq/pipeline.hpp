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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "profq/corpus.hpp"
#include "profq/error.hpp"
#include "profq/features.hpp"
#include "profq/learn/forest.hpp"
#include "profq/learn/metrics.hpp"
#include "profq/learn/svm.hpp"
#include "profq/stats.hpp"

// Glue between the corpus, feature, statistics and learning layers.
namespace profq {

enum class TargetKind { kProfessionalismMean, kOriginBinary };

struct TargetVariable {
  TargetKind kind = TargetKind::kOriginBinary;
  std::vector<double> values;  // corpus order
};

inline TargetVariable make_target(const Corpus& corpus, TargetKind kind) {
  TargetVariable t;
  t.kind = kind;
  for (const auto& r : corpus.records) {
    if (kind == TargetKind::kOriginBinary) {
      t.values.push_back(origin_code(r.origin));
    } else {
      if (!r.rating_mean)
        throw Error(ErrorCode::kInvalidArgument,
                    "record '" + r.id + "' has no professionalism rating");
      t.values.push_back(*r.rating_mean);
    }
  }
  return t;
}

inline std::vector<int> origin_labels(const Corpus& corpus) {
  std::vector<int> y;
  y.reserve(corpus.size());
  for (const auto& r : corpus.records) y.push_back(origin_code(r.origin));
  return y;
}

inline std::vector<std::string> corpus_texts(const Corpus& corpus) {
  std::vector<std::string> out;
  out.reserve(corpus.size());
  for (const auto& r : corpus.records) out.push_back(r.text);
  return out;
}

inline learn::Dataset to_dataset(const std::vector<FeatureVector>& features,
                                 const std::vector<int>& labels) {
  learn::Dataset d;
  d.labels = labels;
  for (const auto& f : features) d.rows.emplace_back(f.values.begin(), f.values.end());
  return d;
}

/// Spearman table of the selected feature columns against a target.
inline std::vector<stats::CorrelationResult> correlate_features(
    const std::vector<FeatureVector>& features, const TargetVariable& target, FeatureSet set,
    const stats::PValueMethod& method = {}, unsigned workers = 1) {
  if (features.size() != target.values.size())
    throw Error(ErrorCode::kLengthMismatch, "feature rows and target differ in length");
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;
  for (std::size_t c : feature_columns(set)) {
    names.emplace_back(kFeatureNames[c]);
    std::vector<double> col;
    col.reserve(features.size());
    for (const auto& f : features) col.push_back(f[c]);
    columns.push_back(std::move(col));
  }
  return stats::correlation_table(names, columns, target.values, method, workers);
}

struct ClassifierRun {
  learn::EvalReport forest;
  learn::EvalReport svm;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
};

/// Trains both classifiers on `train` and scores them on `test`.
inline ClassifierRun compare_classifiers(const Corpus& train, const Corpus& test,
                                         const FeatureExtractor& extractor,
                                         const learn::ForestParams& forest_params,
                                         const learn::SvmParams& svm_params, unsigned workers = 1) {
  ClassifierRun run;
  run.train_size = train.size();
  run.test_size = test.size();
  const auto y_train = origin_labels(train);
  const auto y_test = origin_labels(test);

  const auto train_x = feature_matrix(extractor.extract_all(train, workers));
  const auto test_x = feature_matrix(extractor.extract_all(test, workers));
  const auto forest = learn::train_forest(to_dataset(train_x, y_train), forest_params, workers);
  std::vector<int> pred;
  for (const auto& f : test_x)
    pred.push_back(learn::predict_forest(forest, {f.values.begin(), f.values.end()}).label);
  run.forest = learn::evaluate(pred, y_test);

  const auto svm = learn::train_svm(corpus_texts(train), y_train, svm_params);
  pred.clear();
  for (const auto& r : test.records) pred.push_back(learn::predict_svm(svm, r.text).label);
  run.svm = learn::evaluate(pred, y_test);
  return run;
}

}  // namespace profq
