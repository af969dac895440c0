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

#include <cmath>

#include "test_support.hpp"

using namespace profq;
using namespace profq::learn;

namespace {

double norm(const SparseVector& v) {
  double s = 0;
  for (const auto& [i, w] : v) s += w * w;
  return std::sqrt(s);
}

std::pair<std::vector<std::string>, std::vector<int>> toy_corpus() {
  std::vector<std::string> texts;
  std::vector<int> y;
  for (int i = 0; i < 10; ++i) {
    texts.push_back(i % 2 ? "good great" : "great good stuff");
    y.push_back(kHuman);
    texts.push_back(i % 2 ? "bad awful" : "awful bad thing");
    y.push_back(kLlm);
  }
  return {texts, y};
}

}  // namespace

TEST(Tfidf, Terms) {
  EXPECT_EQ(text_terms("What drove Q3?"),
            (std::vector<std::string>{"what", "drove", "q3", "what drove", "drove q3"}));
}

TEST(Tfidf, IdfOfUbiquitousTermIsOne) {
  std::vector<std::string> docs(100, "margin");
  for (int i = 0; i < 50; ++i) docs[static_cast<std::size_t>(i)] += " pricing";
  const auto v = fit_tfidf(docs);
  EXPECT_DOUBLE_EQ(v.idf[*v.index_of("margin")], 1.0);
  EXPECT_DOUBLE_EQ(v.idf[*v.index_of("pricing")], std::log(101.0 / 51.0) + 1.0);
}

TEST(Tfidf, MinDocumentFrequency) {
  const auto v = fit_tfidf({"alpha beta", "alpha gamma", "delta"});
  EXPECT_TRUE(v.index_of("alpha").has_value());
  EXPECT_FALSE(v.index_of("beta").has_value());
  EXPECT_TRUE(std::is_sorted(v.vocabulary.begin(), v.vocabulary.end()));
}

TEST(Tfidf, TransformProperties) {
  const auto v = fit_tfidf({"alpha beta", "alpha beta gamma", "gamma alpha"});
  EXPECT_TRUE(v.transform("zeta omega").empty());
  EXPECT_EQ(v.transform("alpha gamma"), v.transform("alpha gamma"));
  EXPECT_NEAR(norm(v.transform("alpha beta alpha")), 1.0, 1e-12);
}

TEST(Tfidf, EmptyCorpus) {
  try {
    fit_tfidf({"only one"});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyCorpus);
  }
}

TEST(Svm, SeparableToyCorpus) {
  const auto [texts, y] = toy_corpus();
  const auto m = train_svm(texts, y, {});
  for (std::size_t i = 0; i < texts.size(); ++i) EXPECT_EQ(predict_svm(m, texts[i]).label, y[i]);
}

TEST(Svm, SameSeedSameWeights) {
  const auto [texts, y] = toy_corpus();
  const auto a = train_svm(texts, y, {});
  const auto b = train_svm(texts, y, {});
  EXPECT_EQ(a.weights, b.weights);
  EXPECT_EQ(a.bias, b.bias);
  SvmParams other;
  other.seed = 7;
  EXPECT_NE(train_svm(texts, y, other).weights, a.weights);
}

TEST(Svm, WeightNormWithinPegasosBall) {
  const auto [texts, y] = toy_corpus();
  SvmParams p;
  p.lambda = 0.5;
  const auto m = train_svm(texts, y, p);
  double n2 = m.bias * m.bias;
  for (double w : m.weights) n2 += w * w;
  EXPECT_LE(std::sqrt(n2), 1.0 / std::sqrt(p.lambda) + 1e-9);
}

TEST(Svm, Errors) {
  try {
    train_svm({"a b", "a c"}, {kHuman, kHuman}, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSingleClassTraining);
  }
  try {
    train_svm({"a b", "a c"}, {kHuman}, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kLengthMismatch);
  }
}

TEST(Metrics, Arithmetic) {
  std::vector<int> pred, gold;
  auto add = [&](int g, int p, int n) {
    for (int i = 0; i < n; ++i) {
      gold.push_back(g);
      pred.push_back(p);
    }
  };
  add(kHuman, kHuman, 48);
  add(kLlm, kLlm, 48);
  add(kLlm, kHuman, 2);
  add(kHuman, kLlm, 2);
  const auto r = evaluate(pred, gold);
  EXPECT_DOUBLE_EQ(r.accuracy, 0.96);
  EXPECT_NEAR(r.f1, 0.96, 1e-12);
  EXPECT_EQ(r.tp, 48u);
  EXPECT_EQ(r.fp, 2u);
}

TEST(Metrics, PerfectAndDegenerate) {
  const auto perfect = evaluate({1, 0, 1}, {1, 0, 1});
  EXPECT_EQ(perfect.accuracy, 1.0);
  EXPECT_EQ(perfect.f1, 1.0);
  const auto all_human = evaluate({1, 1, 1, 1}, {1, 1, 0, 0});
  EXPECT_EQ(all_human.accuracy, 0.5);
  EXPECT_EQ(all_human.llm.f1, 0.0);
  try {
    evaluate({1}, {1, 0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kLengthMismatch);
  }
}
