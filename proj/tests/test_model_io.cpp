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

#include <random>

#include "synthetic.hpp"
#include "test_support.hpp"

using namespace profq;
using namespace profq::learn;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kInvalidArgument;
}

// Rewrites the payload with `edit` and re-frames it with a valid checksum.
std::string reframe(const std::string& file, const std::function<void(nlohmann::ordered_json&)>& edit) {
  const auto nl = file.find('\n');
  const std::size_t len = std::stoull(file.substr(0, nl));
  auto j = nlohmann::ordered_json::parse(file.substr(nl + 1, len));
  edit(j);
  const std::string payload = j.dump();
  return std::to_string(payload.size()) + "\n" + payload + "\n" + hex64(fnv1a64(payload)) + "\n";
}

ForestModel small_forest() {
  ForestParams p;
  p.n_trees = 25;
  return train_forest(synthetic::xor_clusters(120, 6), p);
}

SvmModel small_svm() {
  std::vector<std::string> texts = {"good great", "great good", "good stuff great", "bad awful",
                                    "awful bad", "bad awful thing"};
  return train_svm(texts, {kHuman, kHuman, kHuman, kLlm, kLlm, kLlm}, {});
}

}  // namespace

TEST(ModelIo, ForestRoundTrip) {
  const auto m = small_forest();
  const auto dir = profq::testing::scratch_dir("model_io");
  save_model(m, dir / "f.model");
  const auto back = std::get<ForestModel>(load_model(dir / "f.model"));
  EXPECT_EQ(back.trees, m.trees);
  EXPECT_EQ(back.importances, m.importances);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int i = 0; i < 100; ++i) {
    const std::vector<double> x = {u(rng), u(rng)};
    EXPECT_EQ(predict_forest(back, x).score, predict_forest(m, x).score);
  }
  EXPECT_EQ(serialize_model(back), serialize_model(m));
}

TEST(ModelIo, SvmRoundTrip) {
  const auto m = small_svm();
  const auto back = std::get<SvmModel>(deserialize_model(serialize_model(m)));
  EXPECT_EQ(back.weights, m.weights);
  EXPECT_EQ(back.vectorizer.vocabulary, m.vectorizer.vocabulary);
  for (const char* t : {"good", "awful bad", "great thing", "nothing known"})
    EXPECT_EQ(predict_svm(back, t).score, predict_svm(m, t).score);
}

TEST(ModelIo, WrongMagic) {
  const auto file = reframe(serialize_model(small_svm()), [](auto& j) { j["magic"] = "other-model"; });
  EXPECT_EQ(code_of([&] { deserialize_model(file); }), ErrorCode::kCorruptFile);
}

TEST(ModelIo, NewerVersion) {
  const auto file = reframe(serialize_model(small_forest()), [](auto& j) { j["version"] = 2; });
  EXPECT_EQ(code_of([&] { deserialize_model(file); }), ErrorCode::kVersionMismatch);
}

TEST(ModelIo, ChecksumAndTruncation) {
  std::string file = serialize_model(small_svm());
  std::string flipped = file;
  flipped[flipped.find("bias") + 8] ^= 1;
  EXPECT_EQ(code_of([&] { deserialize_model(flipped); }), ErrorCode::kCorruptFile);
  EXPECT_EQ(code_of([&] { deserialize_model(file.substr(0, file.size() / 2)); }), ErrorCode::kCorruptFile);
  EXPECT_EQ(code_of([&] { deserialize_model("garbage"); }), ErrorCode::kCorruptFile);
}

TEST(ModelIo, OutOfRangeNodeRejected) {
  const auto file = reframe(serialize_model(small_forest()), [](auto& j) { j["trees"][0]["left"][0] = 100000; });
  EXPECT_EQ(code_of([&] { deserialize_model(file); }), ErrorCode::kCorruptFile);
}

TEST(ModelIo, MissingFile) {
  EXPECT_EQ(code_of([] { load_model("/nonexistent/model"); }), ErrorCode::kIoFailure);
}

TEST(Checksum, KnownVectors) {
  // FNV-1a 64 reference values
  EXPECT_EQ(hex64(fnv1a64("")), "cbf29ce484222325");
  EXPECT_EQ(hex64(fnv1a64("a")), "af63dc4c8601ec8c");
}
