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
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "profq/checksum.hpp"
#include "profq/error.hpp"
#include "profq/learn/forest.hpp"
#include "profq/learn/svm.hpp"

namespace profq::learn {

// On-disk layout:
//   <byte length of payload>\n
//   <payload: one JSON object>\n
//   <FNV-1a 64 of payload, 16 hex digits>\n
// The payload starts with {"magic":"profq-model","version":1,"kind":...,"schema":...}.
inline constexpr const char* kModelMagic = "profq-model";
inline constexpr int kModelVersion = 1;
inline constexpr int kSvmSchema = 29;

using Model = std::variant<ForestModel, SvmModel>;

namespace detail {

using ojson = nlohmann::ordered_json;

inline ojson forest_to_json(const ForestModel& m) {
  ojson j;
  j["magic"] = kModelMagic;
  j["version"] = kModelVersion;
  j["kind"] = "forest";
  j["schema"] = m.dim;
  j["feature_schema_version"] = m.feature_schema_version;
  j["hyper"] = {{"n_trees", m.params.n_trees},     {"max_features", m.params.max_features},
                {"min_leaf", m.params.min_leaf},   {"max_depth", m.params.max_depth},
                {"bootstrap", m.params.bootstrap}, {"seed", m.params.seed}};
  j["importances"] = m.importances;
  ojson trees = ojson::array();
  for (const auto& t : m.trees) {
    std::vector<int> feature, left, right, c0, c1;
    std::vector<double> threshold;
    for (const auto& n : t.nodes) {
      feature.push_back(n.feature);
      threshold.push_back(n.threshold);
      left.push_back(n.left);
      right.push_back(n.right);
      c0.push_back(n.counts[0]);
      c1.push_back(n.counts[1]);
    }
    trees.push_back({{"feature", feature}, {"threshold", threshold}, {"left", left},
                     {"right", right},     {"count_llm", c0},        {"count_human", c1}});
  }
  j["trees"] = std::move(trees);
  return j;
}

inline ojson svm_to_json(const SvmModel& m) {
  ojson j;
  j["magic"] = kModelMagic;
  j["version"] = kModelVersion;
  j["kind"] = "svm";
  j["schema"] = kSvmSchema;
  j["hyper"] = {{"lambda", m.params.lambda}, {"epochs", m.params.epochs}, {"seed", m.params.seed}};
  j["min_df"] = m.vectorizer.min_df;
  j["vocabulary"] = m.vectorizer.vocabulary;
  j["idf"] = m.vectorizer.idf;
  j["weights"] = m.weights;
  j["bias"] = m.bias;
  return j;
}

inline ForestModel forest_from_json(const ojson& j) {
  ForestModel m;
  m.dim = j.at("schema").get<std::size_t>();
  m.feature_schema_version = j.at("feature_schema_version").get<int>();
  const auto& h = j.at("hyper");
  m.params.n_trees = h.at("n_trees").get<int>();
  m.params.max_features = h.at("max_features").get<int>();
  m.params.min_leaf = h.at("min_leaf").get<int>();
  m.params.max_depth = h.at("max_depth").get<int>();
  m.params.bootstrap = h.at("bootstrap").get<bool>();
  m.params.seed = h.at("seed").get<std::uint64_t>();
  m.importances = j.at("importances").get<std::vector<double>>();
  for (const auto& t : j.at("trees")) {
    const auto feature = t.at("feature").get<std::vector<int>>();
    const auto threshold = t.at("threshold").get<std::vector<double>>();
    const auto left = t.at("left").get<std::vector<int>>();
    const auto right = t.at("right").get<std::vector<int>>();
    const auto c0 = t.at("count_llm").get<std::vector<int>>();
    const auto c1 = t.at("count_human").get<std::vector<int>>();
    const std::size_t n = feature.size();
    if (n == 0 || threshold.size() != n || left.size() != n || right.size() != n ||
        c0.size() != n || c1.size() != n)
      throw Error(ErrorCode::kCorruptFile, "inconsistent tree arrays");
    DecisionTree tree;
    for (std::size_t i = 0; i < n; ++i) {
      TreeNode node{feature[i], threshold[i], left[i], right[i], {c0[i], c1[i]}};
      if (!node.is_leaf()) {
        const auto in_range = [n](int k) { return k > 0 && static_cast<std::size_t>(k) < n; };
        if (static_cast<std::size_t>(node.feature) >= m.dim || !in_range(node.left) ||
            !in_range(node.right))
          throw Error(ErrorCode::kCorruptFile, "tree node out of range");
      }
      tree.nodes.push_back(node);
    }
    m.trees.push_back(std::move(tree));
  }
  return m;
}

inline SvmModel svm_from_json(const ojson& j) {
  SvmModel m;
  const auto& h = j.at("hyper");
  m.params.lambda = h.at("lambda").get<double>();
  m.params.epochs = h.at("epochs").get<int>();
  m.params.seed = h.at("seed").get<std::uint64_t>();
  m.vectorizer.min_df = j.at("min_df").get<std::size_t>();
  m.vectorizer.vocabulary = j.at("vocabulary").get<std::vector<std::string>>();
  m.vectorizer.idf = j.at("idf").get<std::vector<double>>();
  m.weights = j.at("weights").get<std::vector<double>>();
  m.bias = j.at("bias").get<double>();
  if (m.vectorizer.idf.size() != m.vectorizer.vocabulary.size() ||
      m.weights.size() != m.vectorizer.vocabulary.size())
    throw Error(ErrorCode::kCorruptFile, "svm arrays disagree with vocabulary size");
  return m;
}

}  // namespace detail

inline std::string serialize_model(const Model& model) {
  const std::string payload = std::visit(
      [](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ForestModel>)
          return detail::forest_to_json(m).dump();
        else
          return detail::svm_to_json(m).dump();
      },
      model);
  std::ostringstream os;
  os << payload.size() << '\n' << payload << '\n' << hex64(fnv1a64(payload)) << '\n';
  return os.str();
}

inline Model deserialize_model(const std::string& data) {
  const auto nl = data.find('\n');
  if (nl == std::string::npos) throw Error(ErrorCode::kCorruptFile, "missing length line");
  std::size_t len = 0;
  try {
    std::size_t used = 0;
    len = std::stoull(data.substr(0, nl), &used);
    if (used != nl) throw std::invalid_argument("length");
  } catch (const std::exception&) {
    throw Error(ErrorCode::kCorruptFile, "bad length line");
  }
  if (data.size() < nl + 1 + len + 1 + 16) throw Error(ErrorCode::kCorruptFile, "truncated model file");
  const std::string payload = data.substr(nl + 1, len);
  if (data[nl + 1 + len] != '\n') throw Error(ErrorCode::kCorruptFile, "payload length mismatch");
  const std::string checksum = data.substr(nl + 2 + len, 16);
  if (checksum != hex64(fnv1a64(payload))) throw Error(ErrorCode::kCorruptFile, "checksum mismatch");

  detail::ojson j;
  try {
    j = detail::ojson::parse(payload);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kCorruptFile, std::string("payload is not JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("magic") || j.at("magic") != kModelMagic)
    throw Error(ErrorCode::kCorruptFile, "wrong magic string");
  if (!j.contains("version") || !j.at("version").is_number_integer())
    throw Error(ErrorCode::kCorruptFile, "missing version");
  if (j.at("version").get<int>() != kModelVersion)
    throw Error(ErrorCode::kVersionMismatch, "model version " + j.at("version").dump() +
                                                 ", reader supports " + std::to_string(kModelVersion));
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "forest") return detail::forest_from_json(j);
    if (kind == "svm") return detail::svm_from_json(j);
    throw Error(ErrorCode::kCorruptFile, "unknown model kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kCorruptFile, std::string("malformed model payload: ") + e.what());
  }
}

inline void save_model(const Model& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot write " + path.string());
  out << serialize_model(model);
  if (!out) throw Error(ErrorCode::kIoFailure, "failed writing " + path.string());
}

inline Model load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return deserialize_model(buf.str());
}

}  // namespace profq::learn
