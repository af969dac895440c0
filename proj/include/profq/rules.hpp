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
#include <cctype>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "profq/error.hpp"
#include "profq/textcore.hpp"

namespace profq {

// Token pattern language used by the pragmatic rules file.
//
//   word        literal lowercase token (punctuation such as "," allowed)
//   (a|b|c)     one of several literals
//   x?          optional element (any element except a bare "?")
//   _           any single word or number token
//   *           gap of 0..8 tokens
//   <NAME>      capitalised token found in the first-name gazetteer
//   <NUM>       digit-only number or a word from the [cardinals] section
//   <PAREN>     parenthesised span "( ... )"
//   <CLAUSE>    everything up to the next , ; : or sentence end
//   ^           anchors the pattern at the first word of the sentence
struct PatternElement {
  enum class Kind { kLiteral, kAny, kGap, kName, kNum, kParen, kClause };
  Kind kind = Kind::kLiteral;
  std::vector<std::string> literals;
  bool optional = false;
};

struct Pattern {
  std::string source;
  bool anchored = false;
  std::vector<PatternElement> elements;
};

struct TokenSpan {
  std::size_t first = 0;
  std::size_t last = 0;  // exclusive
};

class RuleSet {
 public:
  static constexpr std::size_t kMaxGap = 8;

  const std::vector<Pattern>& patterns(const std::string& section) const {
    static const std::vector<Pattern> kEmpty;
    auto it = patterns_.find(section);
    return it == patterns_.end() ? kEmpty : it->second;
  }

  // Single-token word lists ([question.wh], [cardinals], ...).
  std::set<std::string> words(const std::string& section) const {
    std::set<std::string> out;
    for (const auto& p : patterns(section))
      for (const auto& e : p.elements)
        for (const auto& l : e.literals) out.insert(l);
    return out;
  }

  bool has_section(const std::string& section) const { return patterns_.count(section) != 0; }

  const std::set<std::string>& cardinals() const { return cardinals_; }

  void add(const std::string& section, Pattern p) { patterns_[section].push_back(std::move(p)); }

  void finalize() { cardinals_ = words("cardinals"); }

  std::vector<std::string> sections() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : patterns_) out.push_back(k);
    return out;
  }

 private:
  std::map<std::string, std::vector<Pattern>> patterns_;
  std::set<std::string> cardinals_;
};

inline Pattern parse_pattern(std::string_view line) {
  Pattern p;
  p.source = trim(line);
  std::istringstream in(p.source);
  std::string tok;
  bool first = true;
  while (in >> tok) {
    if (first && tok.front() == '^') {
      p.anchored = true;
      tok.erase(0, 1);
      if (tok.empty()) {
        first = false;
        continue;
      }
    }
    first = false;
    PatternElement e;
    if (tok.size() > 1 && tok.back() == '?') {
      e.optional = true;
      tok.pop_back();
    }
    using K = PatternElement::Kind;
    if (tok == "_") {
      e.kind = K::kAny;
    } else if (tok == "*") {
      e.kind = K::kGap;
    } else if (tok == "<NAME>") {
      e.kind = K::kName;
    } else if (tok == "<NUM>") {
      e.kind = K::kNum;
    } else if (tok == "<PAREN>") {
      e.kind = K::kParen;
    } else if (tok == "<CLAUSE>") {
      e.kind = K::kClause;
    } else if (tok.size() > 2 && tok.front() == '(' && tok.back() == ')') {
      std::string body = tok.substr(1, tok.size() - 2);
      std::size_t start = 0;
      while (true) {
        std::size_t bar = body.find('|', start);
        e.literals.push_back(to_lower(body.substr(start, bar - start)));
        if (bar == std::string::npos) break;
        start = bar + 1;
      }
    } else {
      e.literals.push_back(to_lower(tok));
    }
    p.elements.push_back(std::move(e));
  }
  if (p.elements.empty())
    throw Error(ErrorCode::kSchemaViolation, "empty rule pattern: '" + p.source + "'");
  return p;
}

inline RuleSet parse_rules(std::string_view text, const std::string& origin = "<rules>") {
  RuleSet rules;
  std::istringstream in{std::string(text)};
  std::string line, section;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    if (t.front() == '[') {
      if (t.back() != ']' || t.size() < 3)
        throw Error(ErrorCode::kSchemaViolation,
                    origin + ":" + std::to_string(line_no) + ": bad section header");
      section = t.substr(1, t.size() - 2);
      continue;
    }
    if (section.empty())
      throw Error(ErrorCode::kSchemaViolation,
                  origin + ":" + std::to_string(line_no) + ": pattern outside a section");
    rules.add(section, parse_pattern(t));
  }
  rules.finalize();
  return rules;
}

inline RuleSet load_rules(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open rules file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_rules(buf.str(), path.string());
}

// Backtracking matcher over the tokens of one sentence.
class PatternMatcher {
 public:
  PatternMatcher(const TokenizedText& text, const Sentence& sentence, const Lexicon& names,
                 const RuleSet& rules)
      : text_(text), sentence_(sentence), names_(names), rules_(rules) {}

  // First-word index of the sentence (skipping leading punctuation).
  std::size_t anchor() const {
    for (std::size_t i = sentence_.first; i < sentence_.last; ++i)
      if (text_.tokens[i].is_wordlike()) return i;
    return sentence_.last;
  }

  // Anchored patterns may also start after leading discourse markers
  // ("um, just a quick one on ...").
  std::vector<std::size_t> anchors() const {
    std::vector<std::size_t> out;
    const auto skip = rules_.words("anchor.skip");
    std::size_t i = anchor();
    while (i < sentence_.last) {
      out.push_back(i);
      if (!skip.count(text_.tokens[i].lower)) break;
      ++i;
      while (i < sentence_.last && !text_.tokens[i].is_wordlike()) ++i;
    }
    return out;
  }

  // End of a match starting exactly at `start`, if any.
  std::optional<std::size_t> match_at(const Pattern& p, std::size_t start) const {
    return match(p, 0, start);
  }

  // Leftmost matches that avoid tokens already marked in `claimed`.
  std::vector<TokenSpan> find_all(const Pattern& p, const std::vector<bool>* claimed) const {
    std::vector<TokenSpan> out;
    auto free_span = [&](std::size_t b, std::size_t e) {
      if (claimed == nullptr) return true;
      for (std::size_t k = b; k < e; ++k)
        if ((*claimed)[k]) return false;
      return true;
    };
    if (p.anchored) {
      for (std::size_t a : anchors()) {
        auto end = match(p, 0, a);
        if (end && *end > a && free_span(a, *end)) {
          out.push_back({a, *end});
          break;
        }
      }
      return out;
    }
    std::size_t pos = sentence_.first;
    while (pos < sentence_.last) {
      auto end = match(p, 0, pos);
      if (end && *end > pos && free_span(pos, *end)) {
        out.push_back({pos, *end});
        pos = *end;
      } else {
        ++pos;
      }
    }
    return out;
  }

  bool contains(const Pattern& p) const { return !find_all(p, nullptr).empty(); }

 private:
  std::optional<std::size_t> match(const Pattern& p, std::size_t ei, std::size_t ti) const {
    if (ei == p.elements.size()) return ti;
    const PatternElement& e = p.elements[ei];
    using K = PatternElement::Kind;
    const auto& toks = text_.tokens;
    const std::size_t end = sentence_.last;

    auto rest = [&](std::size_t next) { return match(p, ei + 1, next); };

    std::optional<std::size_t> r;
    switch (e.kind) {
      case K::kLiteral:
        if (ti < end)
          for (const auto& l : e.literals)
            if (toks[ti].lower == l) {
              r = rest(ti + 1);
              break;
            }
        break;
      case K::kAny:
        if (ti < end && toks[ti].is_wordlike()) r = rest(ti + 1);
        break;
      case K::kGap:
        for (std::size_t g = 0; g <= RuleSet::kMaxGap && ti + g <= end && !r; ++g) r = rest(ti + g);
        break;
      case K::kName:
        if (ti < end && toks[ti].is_word() && is_capitalized(toks[ti].surface) &&
            names_.contains(toks[ti].lower))
          r = rest(ti + 1);
        break;
      case K::kNum:
        if (ti < end && is_cardinal(toks[ti])) r = rest(ti + 1);
        break;
      case K::kParen:
        if (ti < end && toks[ti].surface == "(") {
          for (std::size_t k = ti + 1; k < end; ++k)
            if (toks[k].surface == ")") {
              r = rest(k + 1);
              break;
            }
        }
        break;
      case K::kClause: {
        std::size_t k = ti;
        while (k < end && !is_clause_break(toks[k])) ++k;
        r = rest(k);
        break;
      }
    }
    if (!r && e.optional) r = rest(ti);
    return r;
  }

  bool is_cardinal(const Token& t) const {
    if (t.kind == TokenKind::kNumber)
      return std::all_of(t.surface.begin(), t.surface.end(),
                         [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; });
    return t.is_word() && rules_.cardinals().count(t.lower) != 0;
  }

  static bool is_clause_break(const Token& t) {
    return t.is_punct() && (t.surface == "," || t.surface == ";" || t.surface == ":" ||
                            t.surface == "." || t.surface == "?" || t.surface == "!");
  }

  const TokenizedText& text_;
  const Sentence& sentence_;
  const Lexicon& names_;
  const RuleSet& rules_;
};

}  // namespace profq
