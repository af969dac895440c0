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
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "profq/profq.hpp"

#ifndef PROFQ_DEFAULT_DATA_DIR
#define PROFQ_DEFAULT_DATA_DIR "data"
#endif

namespace profq::cli {

inline constexpr const char* kToolVersion = "0.1.0";

namespace fs = std::filesystem;

// Raised for bad flag values; mapped to exit code 2 like parse errors.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Settings keyed by config-file name. Flags use the same names with "-" for
// "_" and override values read from --config.
using Settings = std::map<std::string, std::string>;

inline Settings read_config_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open config " + path.string());
  Settings s;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#' || t.front() == '[') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw UsageError(path.string() + ":" + std::to_string(line_no) + ": expected key = value");
    std::string key = trim(t.substr(0, eq));
    std::replace(key.begin(), key.end(), '-', '_');
    std::string value = trim(t.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
      value = value.substr(1, value.size() - 2);
    s[key] = value;
  }
  return s;
}

struct RunConfig {
  std::string command;
  std::optional<fs::path> corpus;
  std::optional<fs::path> test_corpus;
  std::optional<fs::path> gold;
  std::optional<CorpusFormat> format;
  fs::path lexicon_dir;
  fs::path rules_file;
  std::uint64_t seed = 42;
  double split_ratio = 0.2;
  bool stratify = true;
  bool no_split = false;
  bool lenient = false;
  TargetKind target = TargetKind::kOriginBinary;
  FeatureSet features = FeatureSet::kAll;
  AnnotationMode annotation_mode = AnnotationMode::kHeuristicOnly;
  std::string model = "forest";
  std::optional<fs::path> model_file;
  std::optional<fs::path> predictions;
  std::optional<fs::path> out;
  std::vector<std::string> texts;
  unsigned threads = 1;
  learn::ForestParams forest;
  learn::SvmParams svm;
  Settings settings;  // merged view, recorded in the manifest
  std::ostream* log = &std::cerr;
};

namespace detail {

inline std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    if (!v.empty() && v.front() == '-') throw std::invalid_argument("negative");
    const auto x = std::stoull(v, &used);
    if (used != v.size()) throw std::invalid_argument("trailing");
    return x;
  } catch (const std::exception&) {
    throw UsageError("--" + key + ": expected an unsigned integer, got '" + v + "'");
  }
}

inline int parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const int x = std::stoi(v, &used);
    if (used != v.size()) throw std::invalid_argument("trailing");
    return x;
  } catch (const std::exception&) {
    throw UsageError("--" + key + ": expected an integer, got '" + v + "'");
  }
}

inline double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument("trailing");
    return x;
  } catch (const std::exception&) {
    throw UsageError("--" + key + ": expected a number, got '" + v + "'");
  }
}

inline bool parse_bool(const std::string& key, const std::string& v) {
  const std::string l = to_lower(v);
  if (l == "true" || l == "1" || l == "yes" || l == "on") return true;
  if (l == "false" || l == "0" || l == "no" || l == "off") return false;
  throw UsageError("--" + key + ": expected true/false, got '" + v + "'");
}

inline void require_existing(const fs::path& p, const std::string& what) {
  if (!fs::exists(p)) throw Error(ErrorCode::kIoFailure, what + " not found: " + p.string());
}

}  // namespace detail

inline RunConfig build_config(const std::string& command, const Settings& s) {
  using namespace detail;
  RunConfig c;
  c.command = command;
  c.settings = s;
  auto get = [&](const std::string& k) -> std::optional<std::string> {
    auto it = s.find(k);
    if (it == s.end()) return std::nullopt;
    return it->second;
  };
  if (auto v = get("corpus")) c.corpus = *v;
  if (auto v = get("test_corpus")) c.test_corpus = *v;
  if (auto v = get("gold")) c.gold = *v;
  if (auto v = get("format")) {
    if (*v == "csv") c.format = CorpusFormat::kCsv;
    else if (*v == "jsonl") c.format = CorpusFormat::kJsonl;
    else throw UsageError("--format must be csv or jsonl");
  }
  if (auto v = get("lexicon_dir")) {
    c.lexicon_dir = *v;
  } else if (const char* env = std::getenv("PROFQ_LEXICON_DIR"); env != nullptr && *env != '\0') {
    c.lexicon_dir = env;
  } else {
    c.lexicon_dir = fs::path(PROFQ_DEFAULT_DATA_DIR) / "lexicons";
  }
  c.rules_file = get("rules_file").value_or((fs::path(PROFQ_DEFAULT_DATA_DIR) / "rules.txt").string());
  if (auto v = get("seed")) c.seed = parse_u64("seed", *v);
  if (auto v = get("split_ratio")) c.split_ratio = parse_double("split-ratio", *v);
  if (!(c.split_ratio > 0.0 && c.split_ratio < 1.0)) throw UsageError("--split-ratio must lie in (0, 1)");
  if (auto v = get("stratify")) c.stratify = parse_bool("stratify", *v);
  if (auto v = get("no_split")) c.no_split = parse_bool("no-split", *v);
  if (auto v = get("lenient")) c.lenient = parse_bool("lenient", *v);
  if (auto v = get("target")) {
    if (*v == "rating") c.target = TargetKind::kProfessionalismMean;
    else if (*v == "origin") c.target = TargetKind::kOriginBinary;
    else throw UsageError("--target must be rating or origin");
  }
  if (auto v = get("features")) {
    if (*v == "nlp") c.features = FeatureSet::kNlp;
    else if (*v == "pragmatic") c.features = FeatureSet::kPragmatic;
    else if (*v == "all") c.features = FeatureSet::kAll;
    else throw UsageError("--features must be nlp, pragmatic or all");
  }
  if (auto v = get("annotation_mode")) {
    if (*v == "gold") c.annotation_mode = AnnotationMode::kPreferGold;
    else if (*v == "heuristic") c.annotation_mode = AnnotationMode::kHeuristicOnly;
    else throw UsageError("--annotation-mode must be gold or heuristic");
  }
  if (auto v = get("model")) {
    if (*v != "forest" && *v != "svm") throw UsageError("--model must be forest or svm");
    c.model = *v;
  }
  if (auto v = get("model_file")) c.model_file = *v;
  if (auto v = get("predictions")) c.predictions = *v;
  if (auto v = get("out")) c.out = *v;
  if (auto v = get("threads")) {
    c.threads = static_cast<unsigned>(parse_u64("threads", *v));
    if (c.threads == 0) c.threads = std::max(1u, std::thread::hardware_concurrency());
  }
  c.forest.seed = c.seed;
  c.svm.seed = c.seed;
  if (auto v = get("n_trees")) c.forest.n_trees = parse_int("n-trees", *v);
  if (auto v = get("max_features")) c.forest.max_features = parse_int("max-features", *v);
  if (auto v = get("min_leaf")) c.forest.min_leaf = parse_int("min-leaf", *v);
  if (auto v = get("max_depth")) c.forest.max_depth = parse_int("max-depth", *v);
  if (auto v = get("bootstrap")) c.forest.bootstrap = parse_bool("bootstrap", *v);
  if (auto v = get("lambda")) c.svm.lambda = parse_double("lambda", *v);
  if (auto v = get("epochs")) c.svm.epochs = parse_int("epochs", *v);
  if (c.forest.n_trees < 1) throw UsageError("--n-trees must be >= 1");
  if (c.forest.min_leaf < 1) throw UsageError("--min-leaf must be >= 1");
  if (!(c.svm.lambda > 0)) throw UsageError("--lambda must be positive");
  if (c.svm.epochs < 1) throw UsageError("--epochs must be >= 1");

  for (const auto& p : {c.corpus, c.test_corpus, c.gold, c.model_file, c.predictions})
    if (p) require_existing(*p, "input file");
  return c;
}

// ---------------------------------------------------------------------------

struct Resources {
  FeatureExtractor extractor;
};

inline Resources load_resources(const RunConfig& c) {
  detail::require_existing(c.lexicon_dir, "lexicon directory");
  detail::require_existing(c.rules_file, "rules file");
  Resources r;
  r.extractor.lexicons = load_lexicon_set(c.lexicon_dir);
  r.extractor.rules = load_rules(c.rules_file);
  r.extractor.mode = c.annotation_mode;
  return r;
}

inline Corpus load_input(const RunConfig& c, const fs::path& path, bool with_gold = true) {
  Corpus corpus = load_corpus(path, c.format.value_or(format_for(path)), LoadOptions{c.lenient});
  for (const auto& issue : corpus.skipped)
    *c.log << "warning: " << path.string() << ": skipped row " << issue.row << ": " << issue.reason << '\n';
  if (with_gold && c.gold) corpus = merge_gold(corpus, *c.gold);
  return corpus;
}

inline Corpus require_corpus(const RunConfig& c) {
  if (!c.corpus) throw UsageError("--corpus is required");
  return load_input(c, *c.corpus);
}

// Training and evaluation views: an explicit test corpus is used verbatim;
// otherwise the corpus is split by (split_ratio, seed, stratify).
struct Views {
  Corpus train;
  Corpus test;
};

inline Views make_views(const RunConfig& c, const Corpus& corpus) {
  if (c.test_corpus) return {corpus, load_input(c, *c.test_corpus)};
  if (c.no_split) return {corpus, corpus};
  const Split split =
      make_split(corpus, c.split_ratio, c.seed, c.stratify ? Stratify::kOrigin : Stratify::kNone);
  return {subset(corpus, split.train_ids), subset(corpus, split.test_ids)};
}

inline void write_manifest(const RunConfig& c, const fs::path& path,
                           const std::vector<fs::path>& outputs) {
  nlohmann::ordered_json m;
  m["tool"] = "profq";
  m["version"] = kToolVersion;
  m["command"] = c.command;
  m["seed"] = c.seed;
  nlohmann::ordered_json settings = nlohmann::ordered_json::object();
  for (const auto& [k, v] : c.settings) settings[k] = v;
  settings["lexicon_dir"] = c.lexicon_dir.string();
  settings["rules_file"] = c.rules_file.string();
  m["config"] = settings;
  m["config_hash"] = hex64(fnv1a64(settings.dump()));
  m["annotation_mode"] = c.annotation_mode == AnnotationMode::kPreferGold ? "gold" : "heuristic";
  nlohmann::ordered_json inputs = nlohmann::ordered_json::object();
  for (const auto& p : {c.corpus, c.test_corpus, c.gold, c.model_file, c.predictions})
    if (p) inputs[p->string()] = hex64(file_checksum(*p));
  inputs[c.rules_file.string()] = hex64(file_checksum(c.rules_file));
  for (const char* lex : {"stopwords.txt", "fillers.txt", "interjections.txt", "first_names.txt",
                          "familiar_words.txt"}) {
    const fs::path p = c.lexicon_dir / lex;
    if (fs::exists(p)) inputs[p.string()] = hex64(file_checksum(p));
  }
  m["inputs"] = inputs;
  nlohmann::ordered_json outs = nlohmann::ordered_json::object();
  for (const auto& p : outputs)
    if (fs::exists(p)) outs[p.string()] = hex64(file_checksum(p));
  m["outputs"] = outs;
  std::ofstream(path) << m.dump(2) << '\n';
}

inline fs::path manifest_path_for(const fs::path& out) {
  return fs::path(out.string() + ".manifest.json");
}

inline std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorCode::kIoFailure, "cannot write " + path.string());
  return os;
}

// ---------------------------------------------------------------------------
// Subcommands

inline int cmd_ingest(const RunConfig& c, std::ostream& out) {
  Corpus corpus = require_corpus(c);
  out << "corpus: " << c.corpus->string() << '\n'
      << "records: " << corpus.size() << " (human " << corpus.count(Origin::kHuman) << ", llm "
      << corpus.count(Origin::kLlm) << ")\n"
      << "skipped rows: " << corpus.skipped.size() << '\n';
  std::size_t rated = 0, annotated = 0;
  for (const auto& r : corpus.records) {
    rated += r.rating_mean ? 1 : 0;
    annotated += r.gold ? 1 : 0;
  }
  out << "rated: " << rated << ", gold-annotated: " << annotated << '\n';
  if (c.out) {
    {
      auto os = open_output(*c.out);
      write_canonical(corpus, os);
    }
    write_manifest(c, manifest_path_for(*c.out), {*c.out});
    out << "wrote " << c.out->string() << '\n';
  }
  return 0;
}

inline std::vector<std::string> extract_columns(FeatureSet set) {
  std::vector<std::string> cols;
  if (set != FeatureSet::kNlp)
    for (std::size_t i = 0; i < kPragmaticDim; ++i) cols.emplace_back(kFeatureNames[i]);
  if (set != FeatureSet::kPragmatic)
    for (auto name : kSurfaceCsvColumns) cols.emplace_back(name);
  return cols;
}

inline int cmd_extract(const RunConfig& c, std::ostream& out) {
  const Corpus corpus = require_corpus(c);
  const Resources res = load_resources(c);
  const auto results = res.extractor.extract_all(corpus, c.threads);
  const auto cols = extract_columns(c.features);

  std::ostringstream csv_out;
  std::vector<std::string> header = {"id", "origin", "annotation_source"};
  header.insert(header.end(), cols.begin(), cols.end());
  csv::write_row(csv_out, header);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    std::vector<std::string> row = {
        corpus.records[i].id, std::string(origin_name(corpus.records[i].origin)),
        results[i].annotation.source == AnnotationSource::kGold ? "gold" : "heuristic"};
    for (const auto& name : cols) row.push_back(stats::format_real(results[i].vector.at(name), 10));
    csv::write_row(csv_out, row);
  }
  if (c.out) {
    open_output(*c.out) << csv_out.str();
    write_manifest(c, manifest_path_for(*c.out), {*c.out});
  } else {
    out << csv_out.str();
  }
  return 0;
}

inline std::string target_title(TargetKind t) {
  return t == TargetKind::kOriginBinary ? "origin (human=1)" : "professionalism";
}

inline int cmd_correlate(const RunConfig& c, std::ostream& out) {
  const Corpus corpus = require_corpus(c);
  const Resources res = load_resources(c);
  const auto features = feature_matrix(res.extractor.extract_all(corpus, c.threads));
  const TargetVariable target = make_target(corpus, c.target);
  stats::PValueMethod method;
  method.seed = c.seed;
  const auto results = correlate_features(features, target, c.features, method, c.threads);

  std::ostringstream md;
  md << "Spearman correlations, target = " << target_title(c.target) << ", n = " << corpus.size()
     << ", annotations = " << (c.annotation_mode == AnnotationMode::kPreferGold ? "gold" : "heuristic")
     << "\n\n";
  stats::write_markdown(md, results, corpus.name);
  out << md.str();
  if (c.out) {
    {
      auto os = open_output(*c.out);
      stats::write_csv(os, results);
    }
    fs::path md_path = *c.out;
    md_path.replace_extension(".md");
    open_output(md_path) << md.str();
    write_manifest(c, manifest_path_for(*c.out), {*c.out, md_path});
  }
  return 0;
}

inline int cmd_train(const RunConfig& c, std::ostream& out) {
  if (!c.out) throw UsageError("train needs --out <model file>");
  const Corpus corpus = require_corpus(c);
  const Corpus train = (c.test_corpus || c.no_split) ? corpus : make_views(c, corpus).train;
  const auto y = origin_labels(train);
  learn::Model model;
  if (c.model == "forest") {
    const Resources res = load_resources(c);
    const auto x = feature_matrix(res.extractor.extract_all(train, c.threads));
    auto forest = learn::train_forest(to_dataset(x, y), c.forest, c.threads);
    forest.feature_schema_version = kFeatureSchemaVersion;
    model = std::move(forest);
  } else {
    model = learn::train_svm(corpus_texts(train), y, c.svm);
  }
  if (c.out->has_parent_path()) fs::create_directories(c.out->parent_path());
  learn::save_model(model, *c.out);
  write_manifest(c, manifest_path_for(*c.out), {*c.out});
  out << "trained " << c.model << " on " << train.size() << " records -> " << c.out->string() << '\n';
  return 0;
}

inline std::vector<learn::Prediction> predict_all(const learn::Model& model, const Corpus& corpus,
                                                  const RunConfig& c) {
  std::vector<learn::Prediction> preds;
  if (const auto* forest = std::get_if<learn::ForestModel>(&model)) {
    const Resources res = load_resources(c);
    for (const auto& r : res.extractor.extract_all(corpus, c.threads))
      preds.push_back(learn::predict_forest(*forest, {r.vector.values.begin(), r.vector.values.end()}));
  } else {
    const auto& svm = std::get<learn::SvmModel>(model);
    for (const auto& r : corpus.records) preds.push_back(learn::predict_svm(svm, r.text));
  }
  return preds;
}

// External baselines: CSV with header id,predicted_label.
inline std::map<std::string, int> read_external_predictions(const fs::path& path) {
  const auto rows = csv::parse(profq::detail::read_file(path));
  if (rows.empty()) throw Error(ErrorCode::kEmptyFile, path.string() + " is empty");
  const auto& h = rows.front().fields;
  if (h.size() < 2 || trim(h[0]) != "id" || trim(h[1]) != "predicted_label")
    throw Error(ErrorCode::kMalformedRow, path.string() + ": header must be id,predicted_label");
  std::map<std::string, int> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& f = rows[i].fields;
    if (f.size() < 2)
      throw Error(ErrorCode::kMalformedRow, path.string() + ": row " + std::to_string(i) + ": too few fields");
    auto o = parse_origin(f[1]);
    if (!o)
      throw Error(ErrorCode::kUnknownOriginLabel,
                  path.string() + ": row " + std::to_string(i) + ": unknown label '" + f[1] + "'");
    out[trim(f[0])] = origin_code(*o);
  }
  return out;
}

inline int cmd_evaluate(const RunConfig& c, std::ostream& out) {
  const Corpus corpus = require_corpus(c);
  std::vector<int> pred, gold;
  std::string title;
  if (c.predictions) {
    // scored against every record of --corpus
    const auto ext = read_external_predictions(*c.predictions);
    for (const auto& r : corpus.records) {
      auto it = ext.find(r.id);
      if (it == ext.end())
        throw Error(ErrorCode::kUnknownId, c.predictions->string() + ": no prediction for id '" + r.id + "'");
      pred.push_back(it->second);
      gold.push_back(origin_code(r.origin));
    }
    title = "external predictions " + c.predictions->string();
  } else {
    if (!c.model_file) throw UsageError("evaluate needs --model-file or --predictions");
    const learn::Model model = learn::load_model(*c.model_file);
    const Corpus test = make_views(c, corpus).test;
    for (const auto& p : predict_all(model, test, c)) pred.push_back(p.label);
    gold = origin_labels(test);
    title = std::string(std::holds_alternative<learn::ForestModel>(model) ? "forest" : "svm") +
            " model " + c.model_file->string();
  }
  const learn::EvalReport report = learn::evaluate(pred, gold);
  learn::print_report(out, report, title);
  auto j = learn::report_to_json(report);
  if (c.out) {
    open_output(*c.out) << j.dump(2) << '\n';
    write_manifest(c, manifest_path_for(*c.out), {*c.out});
  } else {
    out << j.dump(2) << '\n';
  }
  return 0;
}

inline int cmd_predict(const RunConfig& c, std::ostream& out) {
  if (!c.model_file) throw UsageError("predict needs --model-file");
  Corpus corpus;
  if (c.corpus) {
    corpus = load_input(c, *c.corpus);
  } else if (!c.texts.empty()) {
    for (std::size_t i = 0; i < c.texts.size(); ++i) {
      QuestionRecord r;
      r.id = "text" + std::to_string(i + 1);
      r.text = c.texts[i];
      if (is_blank(r.text)) throw Error(ErrorCode::kMalformedRow, "--text " + std::to_string(i + 1) + " is empty");
      corpus.records.push_back(std::move(r));
    }
  } else {
    throw UsageError("predict needs --corpus or --text");
  }
  const learn::Model model = learn::load_model(*c.model_file);
  const auto preds = predict_all(model, corpus, c);
  std::ostringstream os;
  os << "id,label,score\n";
  for (std::size_t i = 0; i < preds.size(); ++i)
    os << csv::quote(corpus.records[i].id) << ','
       << origin_name(preds[i].label == learn::kHuman ? Origin::kHuman : Origin::kLlm) << ','
       << stats::format_real(preds[i].score, 10) << '\n';
  if (c.out) {
    open_output(*c.out) << os.str();
    write_manifest(c, manifest_path_for(*c.out), {*c.out});
  } else {
    out << os.str();
  }
  return 0;
}

inline int cmd_report(const RunConfig& c, std::ostream& out) {
  if (!c.out) throw UsageError("report needs --out <directory>");
  const Corpus corpus = require_corpus(c);
  const Resources res = load_resources(c);
  fs::create_directories(*c.out);
  std::vector<fs::path> outputs;

  const auto features = feature_matrix(res.extractor.extract_all(corpus, c.threads));
  stats::PValueMethod method;
  method.seed = c.seed;
  std::ostringstream t1;
  t1 << "# Feature correlations\n\nannotations = "
     << (c.annotation_mode == AnnotationMode::kPreferGold ? "gold" : "heuristic")
     << ", n = " << corpus.size() << "\n\n";
  std::vector<std::pair<std::string, TargetKind>> targets = {{"origin", TargetKind::kOriginBinary}};
  const bool rated = std::all_of(corpus.records.begin(), corpus.records.end(),
                                 [](const QuestionRecord& r) { return r.rating_mean.has_value(); });
  if (rated) targets.emplace_back("rating", TargetKind::kProfessionalismMean);
  for (const auto& [name, kind] : targets) {
    const auto results = correlate_features(features, make_target(corpus, kind), FeatureSet::kAll,
                                            method, c.threads);
    t1 << "## target: " << target_title(kind) << "\n\n";
    stats::write_markdown(t1, results, corpus.name);
    t1 << '\n';
    const fs::path csv_path = *c.out / ("table1_" + name + ".csv");
    auto os = open_output(csv_path);
    stats::write_csv(os, results);
    outputs.push_back(csv_path);
  }
  const fs::path t1_path = *c.out / "table1.md";
  open_output(t1_path) << t1.str();
  outputs.push_back(t1_path);

  const Views views = make_views(c, corpus);
  const ClassifierRun run = compare_classifiers(views.train, views.test, res.extractor, c.forest,
                                                c.svm, c.threads);
  nlohmann::ordered_json t2;
  t2["train_size"] = run.train_size;
  t2["test_size"] = run.test_size;
  t2["random_forest"] = learn::report_to_json(run.forest);
  t2["svm"] = learn::report_to_json(run.svm);
  std::ostringstream md;
  md << "# Classification (human vs llm)\n\ntrain " << run.train_size << ", test " << run.test_size
     << "\n\n| Model | Accuracy | F1 |\n|---|--:|--:|\n";
  char buf[128];
  if (c.predictions) {
    const auto ext = read_external_predictions(*c.predictions);
    std::vector<int> pred, gold;
    for (const auto& r : views.test.records) {
      auto it = ext.find(r.id);
      if (it == ext.end()) continue;
      pred.push_back(it->second);
      gold.push_back(origin_code(r.origin));
    }
    if (!pred.empty()) {
      const auto rep = learn::evaluate(pred, gold);
      t2["external"] = learn::report_to_json(rep);
      std::snprintf(buf, sizeof(buf), "| External | %.2f | %.2f |\n", rep.accuracy, rep.f1);
      md << buf;
    }
  }
  std::snprintf(buf, sizeof(buf), "| SVM | %.2f | %.2f |\n", run.svm.accuracy, run.svm.f1);
  md << buf;
  std::snprintf(buf, sizeof(buf), "| Random Forest | %.2f | %.2f |\n", run.forest.accuracy, run.forest.f1);
  md << buf;
  const fs::path t2_md = *c.out / "table2.md", t2_json = *c.out / "table2.json";
  open_output(t2_md) << md.str();
  open_output(t2_json) << t2.dump(2) << '\n';
  outputs.push_back(t2_md);
  outputs.push_back(t2_json);

  write_manifest(c, *c.out / "manifest.json", outputs);
  out << t1.str() << md.str();
  return 0;
}

// ---------------------------------------------------------------------------

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  CLI::App app{"profq: linguistic features, correlations and origin classifiers for expert questions"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  Settings given;
  std::string config_path;
  std::vector<std::string> texts;
  std::map<std::string, std::string> values;

  auto add = [&](CLI::App* sub, const std::string& key, const std::string& help) {
    std::string flag = key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    sub->add_option("--" + flag, values[sub->get_name() + "." + key], help);
  };
  auto add_flag = [&](CLI::App* sub, const std::string& key, const std::string& help) {
    std::string flag = key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    sub->add_flag("--" + flag, help);
  };
  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "key = value config file; flags override it");
    add(sub, "corpus", "question corpus (.csv or .jsonl)");
    add(sub, "format", "corpus format: csv|jsonl (default from extension)");
    add(sub, "gold", "gold annotation JSON keyed by id");
    add(sub, "lexicon_dir", "lexicon directory (env PROFQ_LEXICON_DIR)");
    add(sub, "rules_file", "pragmatic rules file");
    add(sub, "annotation_mode", "gold|heuristic");
    add(sub, "seed", "random seed");
    add(sub, "threads", "worker threads (0 = all cores)");
    add(sub, "out", "output path");
    add_flag(sub, "lenient", "skip invalid rows instead of failing");
  };
  auto split_opts = [&](CLI::App* sub) {
    add(sub, "test_corpus", "held-out test corpus used verbatim");
    add(sub, "split_ratio", "test fraction for the internal split");
    add(sub, "stratify", "stratify the split on origin (true|false)");
    add_flag(sub, "no_split", "use the whole corpus");
  };
  auto model_opts = [&](CLI::App* sub) {
    add(sub, "n_trees", "forest size");
    add(sub, "max_features", "features tried per split");
    add(sub, "min_leaf", "minimum samples per leaf");
    add(sub, "max_depth", "maximum depth (0 = unlimited)");
    add(sub, "bootstrap", "bootstrap rows per tree (true|false)");
    add(sub, "lambda", "SVM regularisation");
    add(sub, "epochs", "SVM epochs");
  };

  auto* ingest = app.add_subcommand("ingest", "validate a corpus and write canonical JSONL");
  common(ingest);
  auto* extract = app.add_subcommand("extract", "write per-question feature CSV");
  common(extract);
  add(extract, "features", "nlp|pragmatic|all");
  auto* correlate = app.add_subcommand("correlate", "Spearman correlation table");
  common(correlate);
  add(correlate, "features", "nlp|pragmatic|all");
  add(correlate, "target", "rating|origin");
  auto* train = app.add_subcommand("train", "train a classifier and save it");
  common(train);
  split_opts(train);
  model_opts(train);
  add(train, "model", "forest|svm");
  auto* evaluate = app.add_subcommand("evaluate", "score a model or external predictions");
  common(evaluate);
  split_opts(evaluate);
  add(evaluate, "model_file", "model written by train");
  add(evaluate, "predictions", "external predictions CSV (id,predicted_label)");
  auto* predict = app.add_subcommand("predict", "label questions with a saved model");
  common(predict);
  add(predict, "model_file", "model written by train");
  predict->add_option("--text", texts, "question text (repeatable)");
  auto* report = app.add_subcommand("report", "correlation and classification tables in one run");
  common(report);
  split_opts(report);
  model_opts(report);
  add(report, "predictions", "external predictions CSV (id,predicted_label)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  try {
    Settings settings;
    if (!config_path.empty()) settings = read_config_file(config_path);
    for (const auto& [k, v] : values) {
      const auto dot = k.find('.');
      if (k.substr(0, dot) != name) continue;
      const std::string key = k.substr(dot + 1);
      std::string flag = key;
      std::replace(flag.begin(), flag.end(), '_', '-');
      if (sub->get_option("--" + flag)->count() > 0) settings[key] = v;
    }
    for (const char* f : {"lenient", "no_split"}) {
      std::string flag = f;
      std::replace(flag.begin(), flag.end(), '_', '-');
      if (auto* opt = sub->get_option_no_throw("--" + flag); opt != nullptr && opt->count() > 0)
        settings[f] = "true";
    }
    RunConfig c = build_config(name, settings);
    c.texts = texts;
    c.log = &err;
    if (name == "ingest") return cmd_ingest(c, out);
    if (name == "extract") return cmd_extract(c, out);
    if (name == "correlate") return cmd_correlate(c, out);
    if (name == "train") return cmd_train(c, out);
    if (name == "evaluate") return cmd_evaluate(c, out);
    if (name == "predict") return cmd_predict(c, out);
    if (name == "report") return cmd_report(c, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n\n" << sub->help();
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace profq::cli
