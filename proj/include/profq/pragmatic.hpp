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
#include <vector>

#include <nlohmann/json.hpp>

#include "profq/error.hpp"
#include "profq/rules.hpp"
#include "profq/textcore.hpp"

namespace profq {

enum class Regulator { kAcknowledgment, kRecipient, kTheme, kEnumeration, kCounting, kInsideComment };
enum class PrefaceType { kFact, kOpinion, kReportedSpeech, kMeta };
enum class QuestionType { kOpen, kPolar, kClosedList };
enum class RequestType { kExplanation, kClarification, kConfirmation, kData, kOpinion };
enum class AnnotationSource { kGold, kHeuristic };

inline constexpr std::array<std::string_view, 6> kRegulatorNames = {
    "acknowledgment", "recipient", "theme", "enumeration", "counting", "inside_comment"};
inline constexpr std::array<std::string_view, 4> kPrefaceTypeNames = {
    "fact", "opinion", "reported_speech", "meta"};
inline constexpr std::array<std::string_view, 3> kQuestionTypeNames = {"open", "polar",
                                                                       "closed_list"};
inline constexpr std::array<std::string_view, 5> kRequestTypeNames = {
    "explanation", "clarification", "confirmation", "data", "opinion"};

template <typename Enum, std::size_t N>
struct CategoryCounts {
  std::array<int, N> values{};

  int& operator[](Enum e) { return values[static_cast<std::size_t>(e)]; }
  int operator[](Enum e) const { return values[static_cast<std::size_t>(e)]; }
  int total() const {
    int s = 0;
    for (int v : values) s += v;
    return s;
  }
  bool operator==(const CategoryCounts&) const = default;
};

using RegulatorCounts = CategoryCounts<Regulator, 6>;
using QuestionTypeCounts = CategoryCounts<QuestionType, 3>;
using RequestTypeCounts = CategoryCounts<RequestType, 5>;

struct Preface {
  PrefaceType type = PrefaceType::kFact;
  int length_tokens = 1;
  bool operator==(const Preface&) const = default;
};

struct PragmaticAnnotation {
  RegulatorCounts regulators;
  std::vector<Preface> prefaces;
  QuestionTypeCounts question_types;
  RequestTypeCounts request_types;
  AnnotationSource source = AnnotationSource::kHeuristic;

  int preface_number() const { return static_cast<int>(prefaces.size()); }
  int preface_length() const {
    int s = 0;
    for (const auto& p : prefaces) s += p.length_tokens;
    return s;
  }
  int preface_count(PrefaceType t) const {
    int s = 0;
    for (const auto& p : prefaces) s += p.type == t ? 1 : 0;
    return s;
  }
  bool operator==(const PragmaticAnnotation&) const = default;
};

// ---------------------------------------------------------------------------
// Gold annotation JSON

namespace detail {

template <std::size_t N>
std::optional<std::size_t> index_of(const std::array<std::string_view, N>& names,
                                    std::string_view key) {
  for (std::size_t i = 0; i < N; ++i)
    if (names[i] == key) return i;
  return std::nullopt;
}

template <typename Counts, std::size_t N>
void read_counts(const nlohmann::json& j, const char* field,
                 const std::array<std::string_view, N>& names, Counts& out) {
  if (!j.contains(field)) return;
  const auto& obj = j.at(field);
  if (!obj.is_object())
    throw Error(ErrorCode::kSchemaViolation, std::string("'") + field + "' must be an object");
  for (const auto& [key, value] : obj.items()) {
    auto idx = index_of(names, key);
    if (!idx)
      throw Error(ErrorCode::kSchemaViolation,
                  std::string("unknown key '") + key + "' in '" + field + "'");
    if (!value.is_number_integer() || value.template get<long long>() < 0)
      throw Error(ErrorCode::kSchemaViolation,
                  std::string("'") + field + "." + key + "' must be a non-negative integer");
    out.values[*idx] = value.template get<int>();
  }
}

template <typename Counts, std::size_t N>
nlohmann::ordered_json write_counts(const Counts& c, const std::array<std::string_view, N>& names) {
  nlohmann::ordered_json obj = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < N; ++i) obj[std::string(names[i])] = c.values[i];
  return obj;
}

}  // namespace detail

inline PragmaticAnnotation annotation_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kSchemaViolation, "annotation must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key != "regulators" && key != "prefaces" && key != "question_types" &&
        key != "request_types" && key != "source")
      throw Error(ErrorCode::kSchemaViolation, "unknown annotation key '" + key + "'");
  }
  PragmaticAnnotation a;
  a.source = AnnotationSource::kGold;
  detail::read_counts(j, "regulators", kRegulatorNames, a.regulators);
  detail::read_counts(j, "question_types", kQuestionTypeNames, a.question_types);
  detail::read_counts(j, "request_types", kRequestTypeNames, a.request_types);
  if (j.contains("prefaces")) {
    const auto& arr = j.at("prefaces");
    if (!arr.is_array()) throw Error(ErrorCode::kSchemaViolation, "'prefaces' must be an array");
    for (const auto& p : arr) {
      if (!p.is_object() || !p.contains("type") || !p.at("type").is_string())
        throw Error(ErrorCode::kSchemaViolation, "preface entries need a string 'type'");
      auto idx = detail::index_of(kPrefaceTypeNames, p.at("type").get<std::string>());
      if (!idx)
        throw Error(ErrorCode::kSchemaViolation,
                    "unknown preface type '" + p.at("type").get<std::string>() + "'");
      if (!p.contains("length_tokens") || !p.at("length_tokens").is_number_integer() ||
          p.at("length_tokens").get<long long>() < 1)
        throw Error(ErrorCode::kSchemaViolation, "preface 'length_tokens' must be an integer >= 1");
      a.prefaces.push_back({static_cast<PrefaceType>(*idx), p.at("length_tokens").get<int>()});
    }
  }
  return a;
}

inline nlohmann::ordered_json annotation_to_json(const PragmaticAnnotation& a) {
  nlohmann::ordered_json j;
  j["regulators"] = detail::write_counts(a.regulators, kRegulatorNames);
  j["prefaces"] = nlohmann::ordered_json::array();
  for (const auto& p : a.prefaces)
    j["prefaces"].push_back({{"type", std::string(kPrefaceTypeNames[static_cast<std::size_t>(p.type)])},
                             {"length_tokens", p.length_tokens}});
  j["question_types"] = detail::write_counts(a.question_types, kQuestionTypeNames);
  j["request_types"] = detail::write_counts(a.request_types, kRequestTypeNames);
  return j;
}

// ---------------------------------------------------------------------------
// Heuristic detectors

struct RegulatorMatch {
  Regulator kind;
  std::size_t sentence;
  TokenSpan span;
};

struct PrefaceMatch {
  Preface preface;
  std::size_t sentence;
  TokenSpan span;
};

// Everything the detectors decided for one text, with token spans so the
// regulator/preface exclusivity can be audited.
struct PragmaticTrace {
  std::optional<std::size_t> first_question;
  std::size_t question_proper = 0;
  std::vector<bool> claimed;
  std::vector<RegulatorMatch> regulators;
  std::vector<PrefaceMatch> prefaces;
  std::vector<std::pair<std::size_t, QuestionType>> questions;
  RequestTypeCounts requests;
};

namespace detail {

inline std::string section_for(Regulator r) {
  return std::string(kRegulatorNames[static_cast<std::size_t>(r)]);
}

inline bool any_pattern(const PatternMatcher& m, const RuleSet& rules, const std::string& section) {
  for (const auto& p : rules.patterns(section))
    if (m.contains(p)) return true;
  return false;
}

// The question proper is the first "?"-terminated sentence; a text with none
// is treated as ending in its question proper.
inline void locate_question(const TokenizedText& text, PragmaticTrace& trace) {
  for (std::size_t s = 0; s < text.sentences.size(); ++s)
    if (text.sentences[s].terminator == Terminator::kQuestion) {
      trace.first_question = s;
      break;
    }
  trace.question_proper = trace.first_question.value_or(
      text.sentences.empty() ? 0 : text.sentences.size() - 1);
}

// Inside comments before the question proper are prefaces (meta), so that
// rule only runs from the question proper onward.
inline void run_regulators(const TokenizedText& text, const RuleSet& rules, const Lexicon& names,
                           PragmaticTrace& trace) {
  trace.claimed.assign(text.tokens.size(), false);
  for (std::size_t s = 0; s < text.sentences.size(); ++s) {
    PatternMatcher m(text, text.sentences[s], names, rules);
    for (std::size_t r = 0; r < kRegulatorNames.size(); ++r) {
      const auto kind = static_cast<Regulator>(r);
      if (kind == Regulator::kInsideComment && s < trace.question_proper) continue;
      for (const auto& p : rules.patterns(section_for(kind))) {
        for (const TokenSpan& span : m.find_all(p, &trace.claimed)) {
          for (std::size_t k = span.first; k < span.last; ++k) trace.claimed[k] = true;
          trace.regulators.push_back({kind, s, span});
        }
      }
    }
  }
}

inline void run_prefaces(const TokenizedText& text, const RuleSet& rules, const Lexicon& names,
                         PragmaticTrace& trace) {
  for (std::size_t s = 0; s < trace.question_proper && s < text.sentences.size(); ++s) {
    const Sentence& sent = text.sentences[s];
    if (sent.terminator != Terminator::kDeclarative) continue;
    bool regulated = false;
    for (const auto& r : trace.regulators) regulated = regulated || r.sentence == s;
    if (regulated) continue;
    const int words = static_cast<int>(text.words_in(sent).size());
    if (words == 0) continue;
    PatternMatcher m(text, sent, names, rules);
    PrefaceType type = PrefaceType::kFact;
    if (any_pattern(m, rules, "preface.reported_speech"))
      type = PrefaceType::kReportedSpeech;
    else if (any_pattern(m, rules, "preface.opinion"))
      type = PrefaceType::kOpinion;
    else if (any_pattern(m, rules, "inside_comment"))
      type = PrefaceType::kMeta;
    trace.prefaces.push_back({{type, words}, s, {sent.first, sent.last}});
  }
}

inline QuestionType classify_sentence(const TokenizedText& text, const Sentence& sent,
                                      const RuleSet& rules, const std::vector<bool>* claimed) {
  const auto wh = rules.words("question.wh");
  const auto aux = rules.words("question.aux");
  const auto skip = rules.words("question.skip");

  std::vector<std::string> words;
  for (std::size_t i = sent.first; i < sent.last; ++i) {
    const Token& t = text.tokens[i];
    if (!t.is_wordlike()) continue;
    if (words.empty() && ((claimed != nullptr && (*claimed)[i]) || skip.count(t.lower) != 0))
      continue;
    words.push_back(t.lower);
  }
  if (words.empty()) return QuestionType::kOpen;

  const bool wh_first = wh.count(words[0]) != 0;
  const bool aux_first = aux.count(words[0]) != 0;
  if (wh_first || aux_first) {
    for (std::size_t i = 2; i + 1 < words.size(); ++i)
      if (words[i] == "or") return QuestionType::kClosedList;
  }
  if (wh_first) return QuestionType::kOpen;
  if (aux_first) {
    for (std::size_t i = 2; i <= 4 && i < words.size(); ++i)
      if (wh.count(words[i]) != 0) return QuestionType::kOpen;
    return QuestionType::kPolar;
  }
  return QuestionType::kOpen;
}

inline void count_requests(const TokenizedText& text, const Sentence& sent, const RuleSet& rules,
                           const Lexicon& names, std::optional<QuestionType> qtype,
                           RequestTypeCounts& out) {
  PatternMatcher m(text, sent, names, rules);
  bool any = false;
  for (std::size_t r = 0; r < kRequestTypeNames.size(); ++r) {
    if (any_pattern(m, rules, "request." + std::string(kRequestTypeNames[r]))) {
      ++out.values[r];
      any = true;
    }
  }
  if (any || !qtype) return;
  if (*qtype == QuestionType::kOpen)
    ++out[RequestType::kExplanation];
  else
    ++out[RequestType::kConfirmation];
}

inline PragmaticTrace trace_without_requests(const TokenizedText& text, const RuleSet& rules,
                                             const Lexicon& names) {
  PragmaticTrace trace;
  locate_question(text, trace);
  run_regulators(text, rules, names, trace);
  return trace;
}

}  // namespace detail

/// Full heuristic pass: regulators, prefaces, question and request types.
inline PragmaticTrace analyze(const TokenizedText& text, const RuleSet& rules,
                              const Lexicon& names) {
  PragmaticTrace trace = detail::trace_without_requests(text, rules, names);
  detail::run_prefaces(text, rules, names, trace);
  for (std::size_t s = 0; s < text.sentences.size(); ++s) {
    const Sentence& sent = text.sentences[s];
    if (sent.terminator != Terminator::kQuestion) continue;
    const QuestionType q = detail::classify_sentence(text, sent, rules, &trace.claimed);
    trace.questions.emplace_back(s, q);
    detail::count_requests(text, sent, rules, names, q, trace.requests);
  }
  // Imperative requests ("Please walk us through ...") still carry a request
  // type; they get no question type and no default mapping.
  if (!trace.first_question && !text.sentences.empty())
    detail::count_requests(text, text.sentences[trace.question_proper], rules, names,
                           std::nullopt, trace.requests);
  return trace;
}

inline RegulatorCounts detect_regulators(const TokenizedText& text, const RuleSet& rules,
                                         const Lexicon& names) {
  RegulatorCounts out;
  for (const auto& m : detail::trace_without_requests(text, rules, names).regulators) ++out[m.kind];
  return out;
}

inline std::vector<Preface> detect_prefaces(const TokenizedText& text, const RuleSet& rules,
                                            const Lexicon& names) {
  PragmaticTrace trace = detail::trace_without_requests(text, rules, names);
  detail::run_prefaces(text, rules, names, trace);
  std::vector<Preface> out;
  for (const auto& p : trace.prefaces) out.push_back(p.preface);
  return out;
}

inline QuestionType classify_question_type(const TokenizedText& text, const Sentence& sentence,
                                           const RuleSet& rules) {
  if (sentence.terminator != Terminator::kQuestion)
    throw Error(ErrorCode::kNotAQuestion, "sentence is not '?'-terminated");
  return detail::classify_sentence(text, sentence, rules, nullptr);
}

inline RequestTypeCounts classify_request_types(const TokenizedText& text, const RuleSet& rules,
                                                const Lexicon& names) {
  PragmaticTrace trace = analyze(text, rules, names);
  if (!trace.first_question)
    throw Error(ErrorCode::kNotAQuestion, "text contains no question sentence");
  return trace.requests;
}

inline PragmaticAnnotation to_annotation(const PragmaticTrace& trace) {
  PragmaticAnnotation a;
  a.source = AnnotationSource::kHeuristic;
  for (const auto& m : trace.regulators) ++a.regulators[m.kind];
  for (const auto& p : trace.prefaces) a.prefaces.push_back(p.preface);
  for (const auto& [s, q] : trace.questions) ++a.question_types[q];
  a.request_types = trace.requests;
  return a;
}

enum class AnnotationMode { kPreferGold, kHeuristicOnly };

inline PragmaticAnnotation annotate(const TokenizedText& text,
                                    const std::optional<PragmaticAnnotation>& gold,
                                    AnnotationMode mode, const RuleSet& rules,
                                    const Lexicon& names) {
  if (mode == AnnotationMode::kPreferGold && gold) {
    PragmaticAnnotation g = *gold;
    g.source = AnnotationSource::kGold;
    return g;
  }
  return to_annotation(analyze(text, rules, names));
}

}  // namespace profq
