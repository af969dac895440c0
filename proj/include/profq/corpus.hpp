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
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "profq/csv.hpp"
#include "profq/error.hpp"
#include "profq/pragmatic.hpp"
#include "profq/rng.hpp"
#include "profq/textcore.hpp"

namespace profq {

enum class Origin { kHuman, kLlm };

inline std::string_view origin_name(Origin o) { return o == Origin::kHuman ? "human" : "llm"; }

// Statistics coding: human = 1, llm = 0.
inline int origin_code(Origin o) { return o == Origin::kHuman ? 1 : 0; }

inline std::optional<Origin> parse_origin(std::string_view label) {
  const std::string l = to_lower(trim(label));
  if (l == "human" || l == "analyst") return Origin::kHuman;
  if (l == "llm" || l == "model" || l == "generated") return Origin::kLlm;
  return std::nullopt;
}

struct QuestionRecord {
  std::string id;
  std::string text;
  Origin origin = Origin::kHuman;
  std::optional<double> rating_mean;
  std::optional<std::vector<int>> ratings;
  std::optional<PragmaticAnnotation> gold;
  nlohmann::ordered_json metadata = nlohmann::ordered_json::object();
};

struct Provenance {
  std::filesystem::path source;
  std::chrono::system_clock::time_point loaded_at{};
};

struct LoadIssue {
  std::size_t row = 0;
  std::string reason;
};

struct Corpus {
  std::string name;
  std::vector<QuestionRecord> records;
  Provenance provenance;
  std::vector<LoadIssue> skipped;  // lenient loads only

  std::size_t size() const { return records.size(); }

  const QuestionRecord* find(const std::string& id) const {
    for (const auto& r : records)
      if (r.id == id) return &r;
    return nullptr;
  }

  std::size_t count(Origin o) const {
    return static_cast<std::size_t>(std::count_if(
        records.begin(), records.end(), [o](const QuestionRecord& r) { return r.origin == o; }));
  }
};

enum class CorpusFormat { kCsv, kJsonl };

struct LoadOptions {
  bool lenient = false;
};

/// Checks the record invariants; returns a reason string on failure.
inline std::optional<std::string> validate_record(const QuestionRecord& r) {
  if (trim(r.id).empty()) return "empty id";
  if (is_blank(r.text)) return "text is empty after trimming";
  if (r.ratings) {
    if (r.ratings->size() != 5) return "expected 5 ratings, got " + std::to_string(r.ratings->size());
    for (int v : *r.ratings)
      if (v < 1 || v > 3) return "rating " + std::to_string(v) + " outside {1,2,3}";
    double mean = 0;
    for (int v : *r.ratings) mean += v;
    mean /= static_cast<double>(r.ratings->size());
    if (r.rating_mean && std::fabs(*r.rating_mean - mean) > 1e-9)
      return "rating_mean does not equal the mean of ratings";
  }
  if (r.rating_mean && (!std::isfinite(*r.rating_mean) || *r.rating_mean < 1.0 || *r.rating_mean > 3.0))
    return "rating_mean outside [1, 3]";
  return std::nullopt;
}

namespace detail {

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline double parse_real(const std::string& s, const std::string& what) {
  const std::string t = trim(s);
  try {
    std::size_t used = 0;
    const double v = std::stod(t, &used);
    if (used != t.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::kMalformedRow, what + " is not a number: '" + s + "'");
  }
}

inline int parse_rating(const std::string& s) {
  const std::string t = trim(s);
  if (t == "1") return 1;
  if (t == "2") return 2;
  if (t == "3") return 3;
  throw Error(ErrorCode::kMalformedRow, "rating '" + s + "' outside {1,2,3}");
}

// Adds one parsed record, enforcing id uniqueness and record invariants.
class CorpusBuilder {
 public:
  CorpusBuilder(Corpus& corpus, const LoadOptions& options) : corpus_(corpus), options_(options) {}

  template <typename Fn>
  void row(std::size_t index, Fn&& make) {
    try {
      QuestionRecord r = make();
      if (auto why = validate_record(r))
        throw Error(ErrorCode::kMalformedRow, *why);
      if (!r.rating_mean && r.ratings) {
        double mean = 0;
        for (int v : *r.ratings) mean += v;
        r.rating_mean = mean / static_cast<double>(r.ratings->size());
      }
      if (!ids_.insert(r.id).second)
        throw Error(ErrorCode::kDuplicateId, "duplicate id '" + r.id + "'");
      corpus_.records.push_back(std::move(r));
    } catch (const Error& e) {
      if (!options_.lenient)
        throw Error(e.code(), corpus_.provenance.source.string() + ": row " + std::to_string(index) +
                                  ": " + strip_code(e.what()));
      corpus_.skipped.push_back({index, e.what()});
    }
  }

 private:
  static std::string strip_code(const std::string& what) {
    auto pos = what.find(": ");
    return pos == std::string::npos ? what : what.substr(pos + 2);
  }

  Corpus& corpus_;
  const LoadOptions& options_;
  std::set<std::string> ids_;
};

inline Origin require_origin(const std::string& label) {
  auto o = parse_origin(label);
  if (!o) throw Error(ErrorCode::kUnknownOriginLabel, "unknown origin label '" + label + "'");
  return *o;
}

inline void load_csv(std::string_view data, Corpus& corpus, const LoadOptions& options) {
  const auto rows = csv::parse(data);
  if (rows.empty()) throw Error(ErrorCode::kEmptyFile, corpus.provenance.source.string() + " is empty");
  const auto& header = rows.front().fields;
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[trim(header[i])] = i;
  for (const char* required : {"id", "text", "origin"})
    if (!col.count(required))
      throw Error(ErrorCode::kMalformedRow, corpus.provenance.source.string() +
                                                ": header lacks required column '" + required + "'");
  static const std::set<std::string> kKnown = {"id",       "text",     "origin",   "rating_mean",
                                               "rating_1", "rating_2", "rating_3", "rating_4",
                                               "rating_5"};
  CorpusBuilder builder(corpus, options);
  for (std::size_t ri = 1; ri < rows.size(); ++ri) {
    const auto& fields = rows[ri].fields;
    builder.row(ri, [&] {
      if (fields.size() != header.size())
        throw Error(ErrorCode::kMalformedRow, "expected " + std::to_string(header.size()) +
                                                  " fields, got " + std::to_string(fields.size()) +
                                                  " (line " + std::to_string(rows[ri].line) + ")");
      auto cell = [&](const std::string& name) -> std::optional<std::string> {
        auto it = col.find(name);
        if (it == col.end() || trim(fields[it->second]).empty()) return std::nullopt;
        return fields[it->second];
      };
      QuestionRecord r;
      r.id = trim(fields[col["id"]]);
      r.text = fields[col["text"]];
      r.origin = require_origin(fields[col["origin"]]);
      if (auto m = cell("rating_mean")) r.rating_mean = parse_real(*m, "rating_mean");
      std::vector<int> ratings;
      for (int k = 1; k <= 5; ++k)
        if (auto v = cell("rating_" + std::to_string(k))) ratings.push_back(parse_rating(*v));
      if (!ratings.empty()) r.ratings = std::move(ratings);
      for (std::size_t i = 0; i < header.size(); ++i)
        if (!kKnown.count(trim(header[i]))) r.metadata[trim(header[i])] = fields[i];
      return r;
    });
  }
}

inline QuestionRecord record_from_json(const nlohmann::ordered_json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kMalformedRow, "line is not a JSON object");
  for (const char* key : {"id", "text", "origin"})
    if (!j.contains(key) || !j.at(key).is_string())
      throw Error(ErrorCode::kMalformedRow, std::string("missing string field '") + key + "'");
  QuestionRecord r;
  r.id = j.at("id").get<std::string>();
  r.text = j.at("text").get<std::string>();
  r.origin = require_origin(j.at("origin").get<std::string>());
  for (const auto& [key, value] : j.items()) {
    if (key == "id" || key == "text" || key == "origin") continue;
    if (key == "rating_mean") {
      if (value.is_null()) continue;
      if (!value.is_number()) throw Error(ErrorCode::kMalformedRow, "rating_mean must be a number");
      r.rating_mean = value.get<double>();
    } else if (key == "ratings") {
      if (value.is_null()) continue;
      if (!value.is_array()) throw Error(ErrorCode::kMalformedRow, "ratings must be an array");
      std::vector<int> ratings;
      for (const auto& v : value) {
        if (!v.is_number_integer()) throw Error(ErrorCode::kMalformedRow, "ratings must be integers");
        ratings.push_back(v.get<int>());
      }
      r.ratings = std::move(ratings);
    } else if (key == "gold") {
      if (value.is_null()) continue;
      try {
        r.gold = annotation_from_json(nlohmann::json::parse(value.dump()));
      } catch (const Error& e) {
        throw Error(ErrorCode::kMalformedRow, std::string("gold: ") + e.what());
      }
    } else {
      r.metadata[key] = value;
    }
  }
  return r;
}

inline void load_jsonl(std::string_view data, Corpus& corpus, const LoadOptions& options) {
  CorpusBuilder builder(corpus, options);
  std::istringstream in{std::string(data)};
  std::string line;
  std::size_t line_no = 0, non_blank = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    ++non_blank;
    builder.row(line_no, [&] {
      nlohmann::ordered_json j;
      try {
        j = nlohmann::ordered_json::parse(line);
      } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::kMalformedRow, std::string("invalid JSON: ") + e.what());
      }
      return record_from_json(j);
    });
  }
  if (non_blank == 0)
    throw Error(ErrorCode::kEmptyFile, corpus.provenance.source.string() + " is empty");
}

}  // namespace detail

inline Corpus load_corpus_from_string(std::string_view data, CorpusFormat format,
                                      const std::string& name = "<memory>",
                                      const LoadOptions& options = {}) {
  Corpus c;
  c.name = name;
  c.provenance.source = name;
  c.provenance.loaded_at = std::chrono::system_clock::now();
  if (format == CorpusFormat::kCsv)
    detail::load_csv(data, c, options);
  else
    detail::load_jsonl(data, c, options);
  if (c.records.empty())
    throw Error(ErrorCode::kEmptyFile, name + " contains no valid records");
  return c;
}

inline Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format,
                          const LoadOptions& options = {}) {
  Corpus c = load_corpus_from_string(detail::read_file(path), format, path.string(), options);
  c.name = path.stem().string();
  return c;
}

inline CorpusFormat format_for(const std::filesystem::path& path) {
  const std::string ext = to_lower(path.extension().string());
  return ext == ".csv" ? CorpusFormat::kCsv : CorpusFormat::kJsonl;
}

inline nlohmann::ordered_json record_to_json(const QuestionRecord& r) {
  nlohmann::ordered_json j;
  j["id"] = r.id;
  j["text"] = r.text;
  j["origin"] = std::string(origin_name(r.origin));
  if (r.rating_mean) j["rating_mean"] = *r.rating_mean;
  if (r.ratings) j["ratings"] = *r.ratings;
  if (r.gold) j["gold"] = annotation_to_json(*r.gold);
  for (const auto& [key, value] : r.metadata.items()) j[key] = value;
  return j;
}

/// Canonical on-disk form: one JSON object per line, in corpus order.
inline void write_canonical(const Corpus& corpus, std::ostream& os) {
  for (const auto& r : corpus.records) os << record_to_json(r).dump() << '\n';
}

struct MergeStats {
  std::size_t matched = 0;
  std::size_t unmatched = 0;  // corpus records without an annotation
};

inline Corpus merge_gold_from_json(const Corpus& corpus, const nlohmann::json& annotations,
                                   MergeStats* stats = nullptr) {
  if (!annotations.is_object())
    throw Error(ErrorCode::kSchemaViolation, "gold file must be a JSON object keyed by id");
  Corpus out = corpus;
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < out.records.size(); ++i) index[out.records[i].id] = i;
  MergeStats s;
  for (const auto& [id, value] : annotations.items()) {
    auto it = index.find(id);
    if (it == index.end()) throw Error(ErrorCode::kUnknownId, "annotation for unknown id '" + id + "'");
    try {
      out.records[it->second].gold = annotation_from_json(value);
    } catch (const Error& e) {
      throw Error(ErrorCode::kSchemaViolation, "id '" + id + "': " + e.what());
    }
    ++s.matched;
  }
  s.unmatched = out.records.size() - s.matched;
  if (stats != nullptr) *stats = s;
  return out;
}

inline Corpus merge_gold(const Corpus& corpus, const std::filesystem::path& annotations_path,
                         MergeStats* stats = nullptr) {
  const std::string data = detail::read_file(annotations_path);
  if (is_blank(data)) {
    if (stats != nullptr) *stats = {0, corpus.size()};
    return corpus;
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(data);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kSchemaViolation, annotations_path.string() + ": " + e.what());
  }
  return merge_gold_from_json(corpus, j, stats);
}

struct Split {
  std::vector<std::string> train_ids;  // corpus order
  std::vector<std::string> test_ids;   // corpus order
  std::uint64_t seed = 0;
  double ratio = 0.0;
  bool stratified = false;
};

enum class Stratify { kOrigin, kNone };

/// Deterministic train/test split. With stratification each origin class
/// contributes round(ratio * class_size) test records.
inline Split make_split(const Corpus& corpus, double ratio, std::uint64_t seed, Stratify stratify) {
  if (!(ratio > 0.0 && ratio < 1.0))
    throw Error(ErrorCode::kInvalidArgument, "split ratio must lie in (0, 1)");
  Split split;
  split.seed = seed;
  split.ratio = ratio;
  split.stratified = stratify == Stratify::kOrigin;

  std::vector<std::vector<std::size_t>> groups;
  if (split.stratified) {
    groups.resize(2);
    for (std::size_t i = 0; i < corpus.records.size(); ++i)
      groups[corpus.records[i].origin == Origin::kHuman ? 0 : 1].push_back(i);
    for (std::size_t g = 0; g < groups.size(); ++g)
      if (groups[g].size() < 2)
        throw Error(ErrorCode::kInsufficientRecords,
                    "class '" + std::string(origin_name(g == 0 ? Origin::kHuman : Origin::kLlm)) +
                        "' has fewer than 2 records");
  } else {
    if (corpus.records.size() < 2)
      throw Error(ErrorCode::kInsufficientRecords, "need at least 2 records to split");
    groups.emplace_back();
    for (std::size_t i = 0; i < corpus.records.size(); ++i) groups[0].push_back(i);
  }

  std::vector<bool> is_test(corpus.records.size(), false);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    auto order = groups[g];
    RandomStream rng = RandomStream::derive(seed, g);
    rng.shuffle(order);
    const auto n_test = static_cast<std::size_t>(std::llround(ratio * static_cast<double>(order.size())));
    for (std::size_t k = 0; k < n_test && k < order.size(); ++k) is_test[order[k]] = true;
  }
  for (std::size_t i = 0; i < corpus.records.size(); ++i)
    (is_test[i] ? split.test_ids : split.train_ids).push_back(corpus.records[i].id);
  return split;
}

/// Sub-corpus holding the listed ids, in corpus order.
inline Corpus subset(const Corpus& corpus, const std::vector<std::string>& ids) {
  std::set<std::string> wanted(ids.begin(), ids.end());
  Corpus out;
  out.name = corpus.name;
  out.provenance = corpus.provenance;
  for (const auto& r : corpus.records)
    if (wanted.count(r.id)) out.records.push_back(r);
  return out;
}

}  // namespace profq
