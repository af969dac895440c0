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
#include <set>
#include <string>
#include <vector>

#include "profq/error.hpp"
#include "profq/textcore.hpp"

namespace profq {

struct SurfaceFeatures {
  double type_token_ratio = 0.0;
  double flesch_kincaid = 0.0;
  double dale_chall = 0.0;
  int word_count = 0;
  int sentence_count = 0;
  int stopword_count = 0;
  int filler_word_count = 0;
  int interjection_count = 0;
  int ner_person_count = 0;
  int question_count = 0;
  int assertion_count = 0;
  double mean_assertion_length = 0.0;
};

/// Flesch-Kincaid grade level.
inline double flesch_kincaid(std::size_t words, std::size_t sentences, std::size_t syllables) {
  if (words == 0 || sentences == 0)
    throw Error(ErrorCode::kDegenerateInput, "Flesch-Kincaid needs at least one word and sentence");
  const double w = static_cast<double>(words);
  return 0.39 * (w / static_cast<double>(sentences)) +
         11.8 * (static_cast<double>(syllables) / w) - 15.59;
}

/// Dale-Chall score from counts; the 3.6365 adjustment applies when more
/// than 5% of words are difficult.
inline double dale_chall_score(std::size_t words, std::size_t sentences, std::size_t difficult) {
  if (words == 0 || sentences == 0)
    throw Error(ErrorCode::kDegenerateInput, "Dale-Chall needs at least one word and sentence");
  const double w = static_cast<double>(words);
  const double pct_difficult = 100.0 * static_cast<double>(difficult) / w;
  double score = 0.1579 * pct_difficult + 0.0496 * (w / static_cast<double>(sentences));
  if (pct_difficult > 5.0) score += 3.6365;
  return score;
}

/// A word is difficult when its lowercase form is not on the familiar list.
inline double dale_chall(const TokenizedText& text, const Lexicon& familiar) {
  std::size_t words = 0, difficult = 0;
  for (const Token& t : text.tokens) {
    if (!t.is_word()) continue;
    ++words;
    if (!familiar.contains(t.lower)) ++difficult;
  }
  return dale_chall_score(words, text.sentences.size(), difficult);
}

namespace detail {

// Token indices counted as person mentions: capitalised gazetteer names
// anywhere, plus one capitalised non-sentence-initial token directly after a
// name (surname).
inline std::vector<bool> person_mask(const TokenizedText& text, const Lexicon& first_names) {
  const auto& toks = text.tokens;
  std::vector<bool> mask(toks.size(), false);
  std::vector<bool> sentence_initial(toks.size(), false);
  for (const Sentence& s : text.sentences)
    for (std::size_t i = s.first; i < s.last; ++i)
      if (toks[i].is_wordlike()) {
        sentence_initial[i] = true;
        break;
      }
  std::vector<bool> name_hit(toks.size(), false);
  for (std::size_t i = 0; i < toks.size(); ++i) {
    const Token& t = toks[i];
    if (!t.is_word() || !is_capitalized(t.surface)) continue;
    if (first_names.contains(t.lower)) {
      name_hit[i] = true;
      mask[i] = true;
    } else if (i > 0 && name_hit[i - 1] && !sentence_initial[i]) {
      mask[i] = true;
    }
  }
  return mask;
}

// Marks tokens consumed by filler entries, longest entry first.
inline std::vector<bool> filler_mask(const TokenizedText& text, const Lexicon& fillers,
                                     int* count) {
  std::vector<bool> mask(text.tokens.size(), false);
  int n = 0;
  for (std::size_t i = 0; i < text.tokens.size();) {
    const std::size_t len = longest_match(fillers, text.tokens, i);
    if (len == 0) {
      ++i;
      continue;
    }
    for (std::size_t k = i; k < i + len; ++k) mask[k] = true;
    ++n;
    i += len;
  }
  if (count != nullptr) *count = n;
  return mask;
}

}  // namespace detail

/// Twelve surface features. An assertion is a declarative sentence holding
/// at least one content word, i.e. a word that is not an interjection, a
/// filler, or part of a person name.
inline SurfaceFeatures extract_surface(const TokenizedText& text, const LexiconSet& lex) {
  SurfaceFeatures f;
  const auto& toks = text.tokens;
  std::set<std::string> distinct;
  std::size_t syllables = 0;
  for (const Token& t : toks) {
    if (!t.is_word()) continue;
    ++f.word_count;
    distinct.insert(t.lower);
    syllables += static_cast<std::size_t>(count_syllables(t.lower));
    if (lex.stopwords.contains(t.lower)) ++f.stopword_count;
    if (lex.interjections.contains(t.lower)) ++f.interjection_count;
  }
  if (f.word_count == 0) throw Error(ErrorCode::kNoWords, "text has no word tokens");

  f.sentence_count = static_cast<int>(text.sentences.size());
  f.type_token_ratio = static_cast<double>(distinct.size()) / f.word_count;
  f.flesch_kincaid = flesch_kincaid(f.word_count, text.sentences.size(), syllables);
  f.dale_chall = dale_chall(text, lex.familiar);

  const auto fillers = detail::filler_mask(text, lex.fillers, &f.filler_word_count);
  const auto persons = detail::person_mask(text, lex.first_names);
  for (bool p : persons) f.ner_person_count += p ? 1 : 0;

  int assertion_words = 0;
  for (const Sentence& s : text.sentences) {
    if (s.terminator == Terminator::kQuestion) {
      ++f.question_count;
      continue;
    }
    if (s.terminator != Terminator::kDeclarative) continue;
    int words = 0;
    bool content = false;
    for (std::size_t i = s.first; i < s.last; ++i) {
      if (!toks[i].is_word()) continue;
      ++words;
      if (!fillers[i] && !persons[i] && !lex.interjections.contains(toks[i].lower)) content = true;
    }
    if (content) {
      ++f.assertion_count;
      assertion_words += words;
    }
  }
  if (f.assertion_count > 0)
    f.mean_assertion_length = static_cast<double>(assertion_words) / f.assertion_count;
  return f;
}

}  // namespace profq
