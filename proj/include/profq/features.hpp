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

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "profq/corpus.hpp"
#include "profq/error.hpp"
#include "profq/pragmatic.hpp"
#include "profq/rules.hpp"
#include "profq/surface.hpp"
#include "profq/textcore.hpp"

namespace profq {

inline constexpr std::size_t kFeatureDim = 29;
inline constexpr int kFeatureSchemaVersion = 1;
inline constexpr std::size_t kPragmaticDim = 17;

// Fixed column order: request types, discourse regulators, prefaces,
// question types, then the twelve surface features.
inline constexpr std::array<std::string_view, kFeatureDim> kFeatureNames = {
    "request_explanation",
    "request_clarification",
    "request_confirmation",
    "reg_acknowledgment",
    "reg_recipient",
    "reg_theme",
    "reg_enumeration",
    "reg_counting",
    "reg_inside_comment",
    "preface_reported_speech",
    "preface_opinion",
    "preface_fact",
    "preface_number",
    "preface_length",
    "qtype_open",
    "qtype_polar",
    "qtype_closed_list",
    "ttr",
    "flesch_kincaid",
    "dale_chall",
    "interjection_count",
    "word_count",
    "sentence_count",
    "filler_count",
    "stopword_count",
    "ner_person_count",
    "question_count",
    "assertion_count",
    "mean_assertion_len",
};

// Column order of the surface block in feature CSV files.
inline constexpr std::array<std::string_view, 12> kSurfaceCsvColumns = {
    "ttr",           "flesch_kincaid",     "dale_chall",       "word_count",
    "sentence_count", "stopword_count",    "filler_count",     "interjection_count",
    "ner_person_count", "question_count",  "assertion_count",  "mean_assertion_len"};

enum class FeatureSet { kNlp, kPragmatic, kAll };

inline std::optional<std::size_t> feature_index(std::string_view name) {
  for (std::size_t i = 0; i < kFeatureDim; ++i)
    if (kFeatureNames[i] == name) return i;
  return std::nullopt;
}

/// Column indices of a feature set, in schema order.
inline std::vector<std::size_t> feature_columns(FeatureSet set) {
  std::vector<std::size_t> out;
  const std::size_t begin = set == FeatureSet::kNlp ? kPragmaticDim : 0;
  const std::size_t end = set == FeatureSet::kPragmatic ? kPragmaticDim : kFeatureDim;
  for (std::size_t i = begin; i < end; ++i) out.push_back(i);
  return out;
}

struct FeatureVector {
  std::array<double, kFeatureDim> values{};

  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }
  double at(std::string_view name) const {
    auto idx = feature_index(name);
    if (!idx) throw Error(ErrorCode::kInvalidArgument, "unknown feature '" + std::string(name) + "'");
    return values[*idx];
  }
  static constexpr std::size_t size() { return kFeatureDim; }
};

inline FeatureVector assemble_features(const PragmaticAnnotation& a, const SurfaceFeatures& s) {
  FeatureVector v;
  std::size_t i = 0;
  v[i++] = a.request_types[RequestType::kExplanation];
  v[i++] = a.request_types[RequestType::kClarification];
  v[i++] = a.request_types[RequestType::kConfirmation];
  for (int c : a.regulators.values) v[i++] = c;
  v[i++] = a.preface_count(PrefaceType::kReportedSpeech);
  v[i++] = a.preface_count(PrefaceType::kOpinion);
  v[i++] = a.preface_count(PrefaceType::kFact);
  v[i++] = a.preface_number();
  v[i++] = a.preface_length();
  for (int c : a.question_types.values) v[i++] = c;
  v[i++] = s.type_token_ratio;
  v[i++] = s.flesch_kincaid;
  v[i++] = s.dale_chall;
  v[i++] = s.interjection_count;
  v[i++] = s.word_count;
  v[i++] = s.sentence_count;
  v[i++] = s.filler_word_count;
  v[i++] = s.stopword_count;
  v[i++] = s.ner_person_count;
  v[i++] = s.question_count;
  v[i++] = s.assertion_count;
  v[i++] = s.mean_assertion_length;
  return v;
}

/// Shared, immutable resources for feature extraction.
struct FeatureExtractor {
  LexiconSet lexicons;
  RuleSet rules;
  AnnotationMode mode = AnnotationMode::kHeuristicOnly;

  struct Result {
    PragmaticAnnotation annotation;
    SurfaceFeatures surface;
    FeatureVector vector;
  };

  Result extract(const std::string& text, const std::optional<PragmaticAnnotation>& gold = {}) const {
    const TokenizedText tt = tokenize(text);
    Result r;
    r.annotation = annotate(tt, gold, mode, rules, lexicons.first_names);
    r.surface = extract_surface(tt, lexicons);
    r.vector = assemble_features(r.annotation, r.surface);
    return r;
  }

  Result extract(const QuestionRecord& record) const { return extract(record.text, record.gold); }

  // Per-record work is independent; results land in corpus order whatever
  // the worker count.
  std::vector<Result> extract_all(const Corpus& corpus, unsigned workers = 1) const {
    std::vector<Result> out(corpus.records.size());
    std::vector<std::optional<Error>> errors(corpus.records.size());
    auto work = [&](std::size_t begin, std::size_t step) {
      for (std::size_t i = begin; i < corpus.records.size(); i += step) {
        try {
          out[i] = extract(corpus.records[i]);
        } catch (const Error& e) {
          errors[i] = Error(e.code(), "record '" + corpus.records[i].id + "': " + e.what());
        }
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
    for (auto& e : errors)
      if (e) throw *e;
    return out;
  }
};

/// Row-major feature matrix over a corpus.
inline std::vector<FeatureVector> feature_matrix(const std::vector<FeatureExtractor::Result>& rs) {
  std::vector<FeatureVector> out;
  out.reserve(rs.size());
  for (const auto& r : rs) out.push_back(r.vector);
  return out;
}

}  // namespace profq
