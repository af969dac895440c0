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

#include <cstdlib>
#include <sstream>

#include "profq_cli.hpp"
#include "test_support.hpp"

using namespace profq;
namespace fs = std::filesystem;
using profq::testing::read_text;
using profq::testing::write_text;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "profq");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string demo() { return (profq::testing::data_dir() / "samples" / "demo_questions.csv").string(); }

// 20 documents that a text classifier separates perfectly.
fs::path toy_corpus(const fs::path& dir) {
  std::ostringstream os;
  os << "id,text,origin\n";
  for (int i = 0; i < 10; ++i) {
    os << "h" << i << ",Thanks. Um what drove good great margins?,human\n";
    os << "l" << i << ",Could you elaborate on the strategic drivers?,llm\n";
  }
  write_text(dir / "toy.csv", os.str());
  return dir / "toy.csv";
}

}  // namespace

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"extract", "--corpus", demo(), "--bogus"}).code, 2);
  const auto bad = run({"correlate", "--corpus", demo(), "--target", "height"});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("--target"), std::string::npos);
  EXPECT_EQ(run({"train", "--corpus", demo()}).code, 2);  // no --out
  EXPECT_EQ(run({"train", "--corpus", demo(), "--out", "/tmp/x", "--split-ratio", "1.5"}).code, 2);
}

TEST(Cli, HelpExitsZero) { EXPECT_EQ(run({"--help"}).code, 0); }

TEST(Cli, ValidationFailuresExitOne) {
  const auto dir = profq::testing::scratch_dir("cli_invalid");
  write_text(dir / "bad.csv", "id,text,origin\nq1,Why?,human\nq2,How?,robot\n");
  const auto r = run({"ingest", "--corpus", (dir / "bad.csv").string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("row 2"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("robot"), std::string::npos) << r.err;
  EXPECT_EQ(run({"ingest", "--corpus", (dir / "missing.csv").string()}).code, 1);
  // lenient mode skips the row instead
  const auto lenient = run({"ingest", "--corpus", (dir / "bad.csv").string(), "--lenient"});
  EXPECT_EQ(lenient.code, 0);
  EXPECT_NE(lenient.out.find("skipped rows: 1"), std::string::npos);
  EXPECT_NE(lenient.err.find("skipped row 2"), std::string::npos);
}

TEST(Cli, IngestWritesCanonicalJsonl) {
  const auto dir = profq::testing::scratch_dir("cli_ingest");
  const auto gold = (profq::testing::data_dir() / "samples" / "demo_gold.json").string();
  const auto r = run({"ingest", "--corpus", demo(), "--gold", gold, "--out", (dir / "c.jsonl").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("records: 40 (human 20, llm 20)"), std::string::npos);
  EXPECT_NE(r.out.find("gold-annotated: 2"), std::string::npos);
  const auto c = load_corpus(dir / "c.jsonl", CorpusFormat::kJsonl);
  EXPECT_EQ(c.size(), 40u);
  EXPECT_TRUE(c.find("h01")->gold.has_value());
  EXPECT_TRUE(fs::exists(dir / "c.jsonl.manifest.json"));
}

TEST(Cli, ExtractColumnsFollowFeatureSet) {
  const auto nlp = run({"extract", "--corpus", demo(), "--features", "nlp"});
  ASSERT_EQ(nlp.code, 0) << nlp.err;
  const std::string header = nlp.out.substr(0, nlp.out.find('\n'));
  EXPECT_EQ(header,
            "id,origin,annotation_source,ttr,flesch_kincaid,dale_chall,word_count,sentence_count,"
            "stopword_count,filler_count,interjection_count,ner_person_count,question_count,"
            "assertion_count,mean_assertion_len");
  const auto prag = run({"extract", "--corpus", demo(), "--features", "pragmatic"});
  EXPECT_EQ(prag.out.substr(0, prag.out.find(',', 40)).find("request_explanation"), 28u);
  EXPECT_EQ(std::count(nlp.out.begin(), nlp.out.end(), '\n'), 41);
}

TEST(Cli, GoldAnnotationModeUsesGold) {
  const auto gold = (profq::testing::data_dir() / "samples" / "demo_gold.json").string();
  const auto r = run({"extract", "--corpus", demo(), "--gold", gold, "--annotation-mode", "gold",
                      "--features", "pragmatic"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("h01,human,gold,"), std::string::npos);
  EXPECT_NE(r.out.find("h02,human,heuristic,"), std::string::npos);
}

TEST(Cli, ConfigFileWithFlagOverride) {
  const auto dir = profq::testing::scratch_dir("cli_config");
  write_text(dir / "run.cfg", "# demo\ncorpus = " + demo() + "\ntarget = rating\nfeatures = nlp\n");
  const auto from_config = run({"correlate", "--config", (dir / "run.cfg").string()});
  ASSERT_EQ(from_config.code, 0) << from_config.err;
  EXPECT_NE(from_config.out.find("target = professionalism"), std::string::npos);
  EXPECT_EQ(from_config.out.find("reg_theme"), std::string::npos);
  const auto overridden = run({"correlate", "--config", (dir / "run.cfg").string(), "--target", "origin"});
  ASSERT_EQ(overridden.code, 0) << overridden.err;
  EXPECT_NE(overridden.out.find("target = origin"), std::string::npos);
  write_text(dir / "broken.cfg", "target rating\n");
  EXPECT_EQ(run({"correlate", "--config", (dir / "broken.cfg").string()}).code, 2);
}

TEST(Cli, LexiconDirFromEnvironment) {
  const auto dir = profq::testing::scratch_dir("cli_env");
  ::setenv("PROFQ_LEXICON_DIR", (dir / "nowhere").c_str(), 1);
  const auto r = run({"extract", "--corpus", demo()});
  ::unsetenv("PROFQ_LEXICON_DIR");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("nowhere"), std::string::npos);
}

TEST(Cli, TrainIsByteIdenticalAcrossRunsAndThreads) {
  const auto dir = profq::testing::scratch_dir("cli_train");
  for (const char* model : {"forest", "svm"}) {
    const auto a = dir / (std::string(model) + "_a.model");
    const auto b = dir / (std::string(model) + "_b.model");
    ASSERT_EQ(run({"train", "--corpus", demo(), "--model", model, "--seed", "42", "--threads", "1",
                   "--n-trees", "60", "--out", a.string()})
                  .code,
              0);
    ASSERT_EQ(run({"train", "--corpus", demo(), "--model", model, "--seed", "42", "--threads", "5",
                   "--n-trees", "60", "--out", b.string()})
                  .code,
              0);
    EXPECT_EQ(read_text(a), read_text(b)) << model;
  }
}

TEST(Cli, EvaluatePerfectToySet) {
  const auto dir = profq::testing::scratch_dir("cli_eval");
  const auto corpus = toy_corpus(dir).string();
  const auto model = (dir / "svm.model").string();
  ASSERT_EQ(run({"train", "--corpus", corpus, "--model", "svm", "--no-split", "--out", model}).code, 0);
  const auto r = run({"evaluate", "--corpus", corpus, "--model-file", model, "--no-split"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("accuracy 1.0000"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("\"accuracy\": 1.0"), std::string::npos);
}

TEST(Cli, EvaluateExternalPredictions) {
  const auto dir = profq::testing::scratch_dir("cli_external");
  const auto corpus = toy_corpus(dir).string();
  std::string preds = "id,predicted_label\n";
  for (int i = 0; i < 10; ++i) preds += "h" + std::to_string(i) + ",human\nl" + std::to_string(i) + (i < 5 ? ",llm\n" : ",human\n");
  write_text(dir / "preds.csv", preds);
  const auto r = run({"evaluate", "--corpus", corpus, "--predictions", (dir / "preds.csv").string(),
                      "--out", (dir / "ext.json").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(read_text(dir / "ext.json"));
  EXPECT_DOUBLE_EQ(j["accuracy"].get<double>(), 0.75);
  write_text(dir / "partial.csv", "id,predicted_label\nh0,human\n");
  EXPECT_EQ(run({"evaluate", "--corpus", corpus, "--predictions", (dir / "partial.csv").string()}).code, 1);
}

TEST(Cli, PredictTexts) {
  const auto dir = profq::testing::scratch_dir("cli_predict");
  const auto corpus = toy_corpus(dir).string();
  const auto model = (dir / "svm.model").string();
  ASSERT_EQ(run({"train", "--corpus", corpus, "--model", "svm", "--no-split", "--out", model}).code, 0);
  const auto r = run({"predict", "--model-file", model, "--text", "Thanks. Um what drove margins?", "--text",
                      "Could you elaborate on the drivers?"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("text1,human,"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("text2,llm,"), std::string::npos) << r.out;
  EXPECT_EQ(run({"predict", "--model-file", model}).code, 2);
}

TEST(Cli, CorruptModelFileExitsOne) {
  const auto dir = profq::testing::scratch_dir("cli_corrupt");
  write_text(dir / "bad.model", "12\nnot a model\n0000000000000000\n");
  const auto r = run({"evaluate", "--corpus", demo(), "--model-file", (dir / "bad.model").string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("CorruptFile"), std::string::npos) << r.err;
}

TEST(Cli, ReportAndManifestAreDeterministic) {
  const auto a = profq::testing::scratch_dir("cli_report_a");
  const auto b = profq::testing::scratch_dir("cli_report_b");
  ASSERT_EQ(run({"report", "--corpus", demo(), "--out", a.string(), "--threads", "1", "--n-trees", "50"}).code, 0);
  ASSERT_EQ(run({"report", "--corpus", demo(), "--out", b.string(), "--threads", "4", "--n-trees", "50"}).code, 0);
  for (const char* f : {"table1.md", "table1_origin.csv", "table1_rating.csv", "table2.md", "table2.json"})
    EXPECT_EQ(read_text(a / f), read_text(b / f)) << f;
  const auto m = nlohmann::json::parse(read_text(a / "manifest.json"));
  EXPECT_EQ(m["seed"], 42);
  EXPECT_TRUE(m.contains("config_hash"));
  EXPECT_EQ(read_text(a / "manifest.json").find("time"), std::string::npos);
}

TEST(Pipeline, FeatureVectorLayout) {
  EXPECT_EQ(kFeatureNames.size(), kFeatureDim);
  EXPECT_EQ(feature_columns(FeatureSet::kNlp).size(), 12u);
  EXPECT_EQ(feature_columns(FeatureSet::kPragmatic).size(), 17u);
  const auto r = profq::testing::extractor().extract("Thanks, John. You said margins were up. Why?");
  EXPECT_EQ(r.vector.at("reg_acknowledgment"), 1);
  EXPECT_EQ(r.vector.at("preface_reported_speech"), 1);
  EXPECT_EQ(r.vector.at("preface_length"), 5);
  EXPECT_EQ(r.vector.at("qtype_open"), 1);
  EXPECT_EQ(r.vector.at("request_explanation"), 1);
  EXPECT_EQ(r.vector.at("ner_person_count"), 1);
  EXPECT_EQ(r.vector.at("question_count"), 1);
}
