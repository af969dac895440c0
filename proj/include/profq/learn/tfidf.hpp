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
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "profq/error.hpp"
#include "profq/textcore.hpp"

namespace profq::learn {

// Sorted (index, weight) pairs.
using SparseVector = std::vector<std::pair<std::size_t, double>>;

/// Lowercase word/number unigrams plus bigrams of adjacent terms.
inline std::vector<std::string> text_terms(const std::string& text) {
  std::vector<std::string> words;
  for (const Token& t : tokenize(text).tokens)
    if (t.is_wordlike()) words.push_back(t.lower);
  std::vector<std::string> terms = words;
  for (std::size_t i = 0; i + 1 < words.size(); ++i) terms.push_back(words[i] + " " + words[i + 1]);
  return terms;
}

struct TfidfVectorizer {
  std::vector<std::string> vocabulary;  // sorted; position = feature index
  std::vector<double> idf;
  std::size_t min_df = 2;

  std::size_t size() const { return vocabulary.size(); }

  std::optional<std::size_t> index_of(const std::string& term) const {
    auto it = std::lower_bound(vocabulary.begin(), vocabulary.end(), term);
    if (it == vocabulary.end() || *it != term) return std::nullopt;
    return static_cast<std::size_t>(it - vocabulary.begin());
  }

  /// Raw term counts times idf, L2-normalised. Out-of-vocabulary terms are
  /// dropped; a document with none maps to the zero vector.
  SparseVector transform(const std::string& text) const {
    std::map<std::size_t, double> counts;
    for (const auto& term : text_terms(text))
      if (auto idx = index_of(term)) counts[*idx] += 1.0;
    SparseVector v;
    double norm = 0.0;
    for (const auto& [idx, tf] : counts) {
      const double w = tf * idf[idx];
      v.emplace_back(idx, w);
      norm += w * w;
    }
    if (norm > 0) {
      norm = std::sqrt(norm);
      for (auto& [idx, w] : v) w /= norm;
    }
    return v;
  }
};

/// idf = ln((1 + N) / (1 + df)) + 1 over terms with df >= min_df.
inline TfidfVectorizer fit_tfidf(const std::vector<std::string>& texts, std::size_t min_df = 2) {
  if (texts.size() < 2) throw Error(ErrorCode::kEmptyCorpus, "TF-IDF needs at least 2 documents");
  std::map<std::string, std::size_t> df;
  for (const auto& text : texts) {
    const auto terms = text_terms(text);
    for (const auto& term : std::set<std::string>(terms.begin(), terms.end())) ++df[term];
  }
  TfidfVectorizer vec;
  vec.min_df = min_df;
  const double n = static_cast<double>(texts.size());
  for (const auto& [term, count] : df) {
    if (count < min_df) continue;
    vec.vocabulary.push_back(term);
    vec.idf.push_back(std::log((1.0 + n) / (1.0 + static_cast<double>(count))) + 1.0);
  }
  return vec;
}

}  // namespace profq::learn
