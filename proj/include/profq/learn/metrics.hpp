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
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "profq/error.hpp"
#include "profq/learn/forest.hpp"

namespace profq::learn {

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Human is the positive class.
struct EvalReport {
  std::size_t tp = 0;  // human predicted human
  std::size_t fn = 0;  // human predicted llm
  std::size_t fp = 0;  // llm predicted human
  std::size_t tn = 0;  // llm predicted llm
  double accuracy = 0.0;
  double f1 = 0.0;  // macro average over the two classes
  ClassMetrics human;
  ClassMetrics llm;

  std::size_t total() const { return tp + fn + fp + tn; }
};

namespace detail {

inline double safe_div(double a, double b) { return b == 0.0 ? 0.0 : a / b; }

inline ClassMetrics class_metrics(std::size_t hit, std::size_t false_alarm, std::size_t miss) {
  ClassMetrics m;
  m.precision = safe_div(static_cast<double>(hit), static_cast<double>(hit + false_alarm));
  m.recall = safe_div(static_cast<double>(hit), static_cast<double>(hit + miss));
  m.f1 = safe_div(2.0 * m.precision * m.recall, m.precision + m.recall);
  return m;
}

}  // namespace detail

inline EvalReport evaluate(const std::vector<int>& predicted, const std::vector<int>& gold) {
  if (predicted.size() != gold.size())
    throw Error(ErrorCode::kLengthMismatch, "predictions (" + std::to_string(predicted.size()) +
                                                ") and gold labels (" + std::to_string(gold.size()) +
                                                ") differ in length");
  if (gold.empty()) throw Error(ErrorCode::kTooFewSamples, "nothing to evaluate");
  EvalReport r;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const bool g = gold[i] == kHuman, p = predicted[i] == kHuman;
    if (g && p) ++r.tp;
    else if (g) ++r.fn;
    else if (p) ++r.fp;
    else ++r.tn;
  }
  r.accuracy = static_cast<double>(r.tp + r.tn) / static_cast<double>(r.total());
  r.human = detail::class_metrics(r.tp, r.fp, r.fn);
  r.llm = detail::class_metrics(r.tn, r.fn, r.fp);
  r.f1 = 0.5 * (r.human.f1 + r.llm.f1);
  return r;
}

inline nlohmann::ordered_json report_to_json(const EvalReport& r) {
  auto cls = [](const ClassMetrics& m) {
    return nlohmann::ordered_json{{"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}};
  };
  return {{"confusion", {{"tp", r.tp}, {"fn", r.fn}, {"fp", r.fp}, {"tn", r.tn}}},
          {"n", r.total()},
          {"accuracy", r.accuracy},
          {"macro_f1", r.f1},
          {"human", cls(r.human)},
          {"llm", cls(r.llm)}};
}

inline void print_report(std::ostream& os, const EvalReport& r, const std::string& title) {
  os << title << '\n';
  os << "                 pred human   pred llm\n";
  os << "  gold human   " << std::string(11 - std::to_string(r.tp).size(), ' ') << r.tp
     << std::string(11 - std::to_string(r.fn).size(), ' ') << r.fn << '\n';
  os << "  gold llm     " << std::string(11 - std::to_string(r.fp).size(), ' ') << r.fp
     << std::string(11 - std::to_string(r.tn).size(), ' ') << r.tn << '\n';
  char buf[96];
  std::snprintf(buf, sizeof(buf), "  accuracy %.4f   macro F1 %.4f\n", r.accuracy, r.f1);
  os << buf;
}

}  // namespace profq::learn
