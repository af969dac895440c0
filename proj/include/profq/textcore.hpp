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
#include <cctype>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "profq/error.hpp"

namespace profq {

enum class TokenKind { kWord, kNumber, kPunctuation };
enum class Terminator { kQuestion, kDeclarative, kNone };

struct Token {
  std::string surface;
  std::string lower;
  std::size_t begin = 0;  // byte offsets into the source text, [begin, end)
  std::size_t end = 0;
  TokenKind kind = TokenKind::kWord;

  bool is_word() const { return kind == TokenKind::kWord; }
  bool is_wordlike() const { return kind != TokenKind::kPunctuation; }
  bool is_punct() const { return kind == TokenKind::kPunctuation; }
};

// Half-open token index range [first, last).
struct Sentence {
  std::size_t first = 0;
  std::size_t last = 0;
  Terminator terminator = Terminator::kNone;

  std::size_t size() const { return last - first; }
};

struct TokenizedText {
  std::string text;
  std::vector<Token> tokens;
  std::vector<Sentence> sentences;

  std::size_t word_count() const {
    return static_cast<std::size_t>(std::count_if(
        tokens.begin(), tokens.end(), [](const Token& t) { return t.is_word(); }));
  }

  // Indices of word-kind tokens inside sentence `s`.
  std::vector<std::size_t> words_in(const Sentence& s) const {
    std::vector<std::size_t> out;
    for (std::size_t i = s.first; i < s.last; ++i)
      if (tokens[i].is_word()) out.push_back(i);
    return out;
  }

  std::size_t sentence_of(std::size_t token_index) const {
    for (std::size_t s = 0; s < sentences.size(); ++s)
      if (token_index >= sentences[s].first && token_index < sentences[s].last) return s;
    return sentences.size();
  }
};

namespace detail {

inline bool is_space(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

// Multi-byte punctuation recognised at token edges: curly quotes, dashes,
// ellipsis, guillemets.
inline constexpr std::array<std::string_view, 9> kUtf8Punct = {
    "“", "”", "‘", "’", "—", "–", "…", "«", "»"};

// Length in bytes of a punctuation mark starting at `pos`, or 0.
inline std::size_t punct_len(std::string_view s, std::size_t pos) {
  const auto c = static_cast<unsigned char>(s[pos]);
  if (c < 0x80) return std::ispunct(c) ? 1 : 0;
  for (auto p : kUtf8Punct)
    if (s.substr(pos, p.size()) == p) return p.size();
  return 0;
}

// Length of the punctuation mark that ends at `end` (exclusive), or 0.
inline std::size_t punct_len_before(std::string_view s, std::size_t begin, std::size_t end) {
  const auto c = static_cast<unsigned char>(s[end - 1]);
  if (c < 0x80) return std::ispunct(c) ? 1 : 0;
  for (auto p : kUtf8Punct)
    if (end - begin >= p.size() && s.substr(end - p.size(), p.size()) == p) return p.size();
  return 0;
}

inline std::size_t dash_len(std::string_view s, std::size_t pos) {
  for (auto p : {std::string_view("—"), std::string_view("–")})
    if (s.substr(pos, p.size()) == p) return p.size();
  return 0;
}

inline bool is_terminal_mark(std::string_view s) { return s == "." || s == "?" || s == "!"; }

}  // namespace detail

// ASCII lowercase; the right single quote is folded to an apostrophe so
// "wasn’t" and "wasn't" share a form.
inline std::string to_lower(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.substr(i, 3) == "’") {
      out.push_back('\'');
      i += 2;
      continue;
    }
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(s[i]))));
  }
  return out;
}

inline std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && detail::is_space(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && detail::is_space(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

inline bool is_blank(std::string_view s) { return trim(s).empty(); }

inline bool is_capitalized(std::string_view s) {
  return !s.empty() && std::isupper(static_cast<unsigned char>(s.front()));
}

inline const std::set<std::string>& abbreviations() {
  static const std::set<std::string> kAbbrev = {"mr", "mrs", "dr",  "inc", "corp",
                                                "vs", "e.g", "i.e", "u.s"};
  return kAbbrev;
}

// Sentence boundaries fall after runs of ".", "?", "!" unless the "." closes
// an abbreviation. A run containing "?" terminates a question. Segments with
// no word or number tokens are folded into their neighbour so every sentence
// carries content.
inline std::vector<Sentence> split_sentences(const std::vector<Token>& tokens) {
  std::vector<Sentence> raw;
  const std::size_t n = tokens.size();
  std::size_t start = 0;
  std::size_t i = 0;
  while (i < n) {
    const Token& t = tokens[i];
    if (!t.is_punct() || !detail::is_terminal_mark(t.surface)) {
      ++i;
      continue;
    }
    if (t.surface == "." && i > 0 && tokens[i - 1].is_wordlike() &&
        abbreviations().count(tokens[i - 1].lower) != 0) {
      ++i;
      continue;
    }
    bool question = false;
    std::size_t j = i;
    while (j < n && tokens[j].is_punct() && detail::is_terminal_mark(tokens[j].surface)) {
      question = question || tokens[j].surface == "?";
      ++j;
    }
    raw.push_back({start, j, question ? Terminator::kQuestion : Terminator::kDeclarative});
    start = j;
    i = j;
  }
  if (start < n) raw.push_back({start, n, Terminator::kNone});

  auto has_content = [&](const Sentence& s) {
    for (std::size_t k = s.first; k < s.last; ++k)
      if (tokens[k].is_wordlike()) return true;
    return false;
  };

  std::vector<Sentence> out;
  std::size_t pending_start = n;  // start of leading content-free segments
  for (const Sentence& s : raw) {
    if (has_content(s)) {
      Sentence merged = s;
      if (pending_start < merged.first) merged.first = pending_start;
      pending_start = n;
      out.push_back(merged);
    } else if (!out.empty()) {
      out.back().last = s.last;
    } else if (pending_start == n) {
      pending_start = s.first;
    }
  }
  if (out.empty() && n > 0) out.push_back({0, n, raw.empty() ? Terminator::kNone : raw.back().terminator});
  return out;
}

// Whitespace split, edge punctuation detached, internal apostrophes and
// hyphens kept. Em/en dashes always separate. Any token containing a digit is
// a number.
inline TokenizedText tokenize(std::string_view text) {
  TokenizedText out;
  out.text = std::string(text);
  const std::string_view s = out.text;

  auto emit = [&](std::size_t b, std::size_t e, TokenKind kind) {
    Token t;
    t.surface = std::string(s.substr(b, e - b));
    t.lower = to_lower(t.surface);
    t.begin = b;
    t.end = e;
    t.kind = kind;
    out.tokens.push_back(std::move(t));
  };

  auto emit_piece = [&](std::size_t b, std::size_t e) {
    std::size_t lead_end = b;
    while (lead_end < e) {
      std::size_t len = detail::punct_len(s, lead_end);
      if (len == 0) break;
      emit(lead_end, lead_end + len, TokenKind::kPunctuation);
      lead_end += len;
    }
    std::vector<std::pair<std::size_t, std::size_t>> trailing;
    std::size_t core_end = e;
    while (core_end > lead_end) {
      std::size_t len = detail::punct_len_before(s, lead_end, core_end);
      if (len == 0) break;
      trailing.emplace_back(core_end - len, core_end);
      core_end -= len;
    }
    if (core_end > lead_end) {
      const auto core = s.substr(lead_end, core_end - lead_end);
      const bool has_digit = std::any_of(core.begin(), core.end(), [](char c) {
        return std::isdigit(static_cast<unsigned char>(c)) != 0;
      });
      emit(lead_end, core_end, has_digit ? TokenKind::kNumber : TokenKind::kWord);
    }
    for (auto it = trailing.rbegin(); it != trailing.rend(); ++it)
      emit(it->first, it->second, TokenKind::kPunctuation);
  };

  std::size_t pos = 0;
  while (pos < s.size()) {
    while (pos < s.size() && detail::is_space(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos >= s.size()) break;
    std::size_t end = pos;
    while (end < s.size() && !detail::is_space(static_cast<unsigned char>(s[end]))) ++end;
    std::size_t piece = pos;
    for (std::size_t k = pos; k < end;) {
      std::size_t d = detail::dash_len(s, k);
      if (d == 0) {
        ++k;
        continue;
      }
      if (k > piece) emit_piece(piece, k);
      emit(k, k + d, TokenKind::kPunctuation);
      k += d;
      piece = k;
    }
    if (end > piece) emit_piece(piece, end);
    pos = end;
  }
  out.sentences = split_sentences(out.tokens);
  return out;
}

// Vowel groups over a,e,i,o,u,y; a final "e" preceded by a consonant is
// silent unless the word ends in consonant + "le". Never less than 1.
inline int count_syllables(std::string_view word) {
  const std::string w = to_lower(word);
  auto vowel = [](char c) {
    return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y';
  };
  auto alpha = [](char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; };
  int groups = 0;
  bool in_group = false;
  for (char c : w) {
    const bool v = vowel(c);
    if (v && !in_group) ++groups;
    in_group = v;
  }
  const std::size_t n = w.size();
  if (n >= 2 && w[n - 1] == 'e' && alpha(w[n - 2]) && !vowel(w[n - 2])) {
    const bool consonant_le = n >= 3 && w[n - 2] == 'l' && alpha(w[n - 3]) && !vowel(w[n - 3]);
    if (!consonant_le) --groups;
  }
  return std::max(groups, 1);
}

struct Lexicon {
  std::string name;
  std::set<std::string> entries;
  std::filesystem::path source_path;
  std::size_t max_words = 1;  // longest entry, in whitespace-separated words

  bool contains(const std::string& entry) const { return entries.count(entry) != 0; }
  std::size_t size() const { return entries.size(); }
};

namespace detail {

inline std::string normalize_entry(std::string_view line) {
  std::istringstream in{std::string(line)};
  std::string word, out;
  while (in >> word) {
    if (!out.empty()) out.push_back(' ');
    out += to_lower(word);
  }
  return out;
}

}  // namespace detail

inline Lexicon make_lexicon(std::string name, const std::vector<std::string>& lines,
                            std::filesystem::path source = {}) {
  Lexicon lex;
  lex.name = std::move(name);
  lex.source_path = std::move(source);
  for (const auto& line : lines) {
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    std::string entry = detail::normalize_entry(t);
    lex.max_words = std::max<std::size_t>(
        lex.max_words, 1 + static_cast<std::size_t>(std::count(entry.begin(), entry.end(), ' ')));
    lex.entries.insert(std::move(entry));
  }
  if (lex.entries.empty())
    throw Error(ErrorCode::kEmptyLexicon,
                "lexicon '" + lex.name + "' has no entries" +
                    (lex.source_path.empty() ? "" : " (" + lex.source_path.string() + ")"));
  return lex;
}

inline Lexicon load_lexicon(const std::filesystem::path& path, std::string name = {}) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open lexicon " + path.string());
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  if (name.empty()) name = path.stem().string();
  return make_lexicon(std::move(name), lines, path);
}

// Length (in tokens) of the longest lexicon entry that matches the lowercase
// forms of consecutive word tokens starting at `start`; 0 when none match.
inline std::size_t longest_match(const Lexicon& lex, const std::vector<Token>& tokens,
                                 std::size_t start) {
  std::size_t best = 0;
  std::string phrase;
  for (std::size_t len = 1; len <= lex.max_words && start + len <= tokens.size(); ++len) {
    const Token& t = tokens[start + len - 1];
    if (!t.is_word()) break;
    if (len > 1) phrase.push_back(' ');
    phrase += t.lower;
    if (lex.contains(phrase)) best = len;
  }
  return best;
}

struct LexiconSet {
  Lexicon stopwords;
  Lexicon fillers;
  Lexicon interjections;
  Lexicon first_names;
  Lexicon familiar;
};

inline LexiconSet load_lexicon_set(const std::filesystem::path& dir) {
  return LexiconSet{
      load_lexicon(dir / "stopwords.txt", "stopwords"),
      load_lexicon(dir / "fillers.txt", "fillers"),
      load_lexicon(dir / "interjections.txt", "interjections"),
      load_lexicon(dir / "first_names.txt", "first_names"),
      load_lexicon(dir / "familiar_words.txt", "familiar"),
  };
}

}  // namespace profq
